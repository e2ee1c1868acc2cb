//! The line-oriented substitution file format.
//!
//! ```text
//! # Thue–Morse
//! alphabet: 0 1
//! map 0 -> 0 1
//! map 1 -> 1 0
//! coding 0 -> a      # optional, total on the alphabet
//! coding 1 -> b
//! ```

use crate::analysis;
use crate::error::{Error, Result};
use crate::morphism::{Alphabet, Coding, Letter, Substitution, Word};

/// A parsed substitution file.
#[derive(Clone, Debug)]
pub struct SubstitutionFile {
    pub substitution: Substitution,
    pub coding: Option<Coding>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn split_rule(rest: &str, line: usize) -> Result<(&str, &str)> {
    let (lhs, rhs) = rest
        .split_once("->")
        .ok_or_else(|| Error::Syntax { line, message: "expected `<letter> -> ...`".into() })?;
    let lhs = lhs.trim();
    if lhs.is_empty() || lhs.contains(char::is_whitespace) {
        return Err(Error::Syntax { line, message: format!("expected a single letter before `->`, got `{lhs}`") });
    }
    Ok((lhs, rhs.trim()))
}

fn image_tokens(alphabet: &Alphabet, rhs: &str, line: usize) -> Result<Word> {
    let mut out = Vec::new();
    for tok in rhs.split_whitespace() {
        match alphabet.letter(tok) {
            Some(a) => out.push(a),
            // Compact alphabets may write images without separators.
            None if alphabet.is_compact() && tok.chars().all(|c| alphabet.letter(&c.to_string()).is_some()) => {
                out.extend(tok.chars().map(|c| alphabet.letter(&c.to_string()).expect("checked")));
            }
            None => return Err(Error::UndeclaredLetter { line, token: tok.to_owned() }),
        }
    }
    Ok(out)
}

/// Parses a substitution file without checking that the substitution is growing.
pub fn parse_substitution(text: &str) -> Result<SubstitutionFile> {
    let mut alphabet: Option<Alphabet> = None;
    let mut images: Vec<Option<Word>> = Vec::new();
    let mut coding_pairs: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("alphabet:") {
            if alphabet.is_some() {
                return Err(Error::Syntax { line, message: "alphabet declared twice".into() });
            }
            let a = Alphabet::new(rest.split_whitespace()).map_err(|e| Error::Syntax { line, message: e.to_string() })?;
            images = vec![None; a.len()];
            alphabet = Some(a);
            continue;
        }
        let (keyword, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        match keyword {
            "map" => {
                let a = alphabet
                    .as_ref()
                    .ok_or_else(|| Error::Syntax { line, message: "`map` before `alphabet:`".into() })?;
                let (lhs, rhs) = split_rule(rest, line)?;
                let letter = a.letter(lhs).ok_or_else(|| Error::UndeclaredLetter { line, token: lhs.into() })?;
                if images[letter.idx()].is_some() {
                    return Err(Error::DuplicateRule { line, token: lhs.into() });
                }
                let img = image_tokens(a, rhs, line)?;
                if img.is_empty() {
                    return Err(Error::EmptyImage { line, token: lhs.into() });
                }
                images[letter.idx()] = Some(img);
            }
            "coding" => {
                let a = alphabet
                    .as_ref()
                    .ok_or_else(|| Error::Syntax { line, message: "`coding` before `alphabet:`".into() })?;
                let (lhs, rhs) = split_rule(rest, line)?;
                if a.letter(lhs).is_none() {
                    return Err(Error::UndeclaredLetter { line, token: lhs.into() });
                }
                if rhs.is_empty() || rhs.contains(char::is_whitespace) {
                    return Err(Error::Syntax { line, message: "a coding maps a letter to exactly one letter".into() });
                }
                if coding_pairs.iter().any(|(_, s, _)| s == lhs) {
                    return Err(Error::DuplicateRule { line, token: lhs.into() });
                }
                coding_pairs.push((line, lhs.to_owned(), rhs.to_owned()));
            }
            other => {
                return Err(Error::Syntax { line, message: format!("unknown directive `{other}`") });
            }
        }
    }

    let alphabet = alphabet.ok_or(Error::Syntax { line: 0, message: "missing `alphabet:` line".into() })?;
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::MissingRule(alphabet.token(Letter(i as u32)).to_owned())))
        .collect::<Result<Vec<_>>>()?;
    let substitution = Substitution::new(alphabet, images)?;
    let coding = if coding_pairs.is_empty() {
        None
    } else {
        let pairs: Vec<(&str, &str)> = coding_pairs.iter().map(|(_, s, t)| (s.as_str(), t.as_str())).collect();
        Some(Coding::from_pairs(substitution.alphabet(), &pairs)?)
    };
    Ok(SubstitutionFile { substitution, coding })
}

/// Parses a substitution file and rejects non-growing substitutions unless allowed.
pub fn load_substitution(text: &str, allow_nongrowing: bool) -> Result<SubstitutionFile> {
    let file = parse_substitution(text)?;
    if !allow_nongrowing {
        analysis::require_growing(&file.substitution)?;
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_thue_morse() {
        let f = parse_substitution("alphabet: 0 1\nmap 0 -> 0 1\nmap 1 -> 1 0\n").unwrap();
        assert_eq!(f.substitution.constant_length(), Some(2));
        assert!(f.coding.is_none());
    }

    #[test]
    fn one_letter_alphabet() {
        let f = parse_substitution("alphabet: a\nmap a -> a a").unwrap();
        assert_eq!(f.substitution.constant_length(), Some(2));
    }

    #[test]
    fn rejects_empty_image() {
        let e = parse_substitution("alphabet: 0\nmap 0 ->").unwrap_err();
        assert!(matches!(e, Error::EmptyImage { line: 2, .. }), "{e:?}");
    }

    #[test]
    fn rejects_undeclared_and_duplicates() {
        let e = parse_substitution("alphabet: 0 1\nmap 0 -> 0 2\nmap 1 -> 1").unwrap_err();
        assert!(matches!(e, Error::UndeclaredLetter { line: 2, .. }), "{e:?}");
        let e = parse_substitution("alphabet: 0 1\nmap 0 -> 0 1\nmap 0 -> 1\nmap 1 -> 1").unwrap_err();
        assert!(matches!(e, Error::DuplicateRule { line: 3, .. }), "{e:?}");
        let e = parse_substitution("alphabet: 0 1\nmap 0 -> 0 1").unwrap_err();
        assert_eq!(e, Error::MissingRule("1".into()));
        let e = parse_substitution("alphabet: 0\nfoo 0 -> 0").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }));
    }

    #[test]
    fn comments_and_codings() {
        let text = "# fiber example\nalphabet: 0 1 2 3\nmap 0 -> 0123\nmap 1 -> 1 0 3 1 # compact or spaced\n\
                    map 2 -> 2 3 3 2\nmap 3 -> 3 2 2 3\ncoding 0 -> 0\ncoding 1 -> 1\ncoding 2 -> 2\ncoding 3 -> 2\n";
        let f = parse_substitution(text).unwrap();
        let c = f.coding.unwrap();
        assert_eq!(c.target().tokens(), &["0", "1", "2"]);
        assert_eq!(c.apply_letter(Letter(3)), Letter(2));
    }

    #[test]
    fn growing_is_enforced_on_load() {
        let text = "alphabet: a b\nmap a -> a b\nmap b -> b\n";
        assert!(matches!(load_substitution(text, false), Err(Error::NotGrowing(_))));
        assert!(load_substitution(text, true).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let f = parse_substitution("alphabet: x yy\nmap x -> yy x\nmap yy -> x x yy\n").unwrap();
        let again = parse_substitution(&f.substitution.to_text()).unwrap();
        assert_eq!(f.substitution, again.substitution);
    }
}
