//! Alphabets, words, substitutions and codings.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a letter inside its [`Alphabet`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// A finite word, stored as letter ids.
pub type Word = Vec<Letter>;

/// Ordered set of distinct tokens. The order fixes every canonical ordering downstream.
#[derive(Clone, Debug)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, Letter>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet { tokens: Vec::new(), index: HashMap::new() };
        for tok in tokens {
            let tok = tok.into();
            if tok.is_empty() || tok.chars().any(char::is_whitespace) || tok.contains("->") {
                return Err(Error::InvalidToken(tok));
            }
            if out.index.contains_key(&tok) {
                return Err(Error::DuplicateLetter(tok));
            }
            out.index.insert(tok.clone(), Letter(out.tokens.len() as u32));
            out.tokens.push(tok);
        }
        if out.tokens.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, a: Letter) -> &str {
        &self.tokens[a.idx()]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn letter(&self, token: &str) -> Option<Letter> {
        self.index.get(token).copied()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + Clone {
        (0..self.tokens.len() as u32).map(Letter)
    }

    /// True when every token is one character, so words can be written without separators.
    pub fn is_compact(&self) -> bool {
        self.tokens.iter().all(|t| t.chars().count() == 1)
    }

    /// Renders a word: concatenated for one-character tokens, space separated otherwise.
    pub fn render(&self, w: &[Letter]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        w.iter().map(|&a| self.token(a)).collect::<Vec<_>>().join(sep)
    }

    /// Parses a word written either with whitespace between tokens or, for compact
    /// alphabets, as a plain string of characters.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let pieces: Vec<String> = if s.chars().any(char::is_whitespace) {
            s.split_whitespace().map(str::to_owned).collect()
        } else if let Some(a) = self.letter(s) {
            return Ok(vec![a]);
        } else if self.is_compact() {
            s.chars().map(String::from).collect()
        } else {
            return Err(Error::InvalidArgument(format!(
                "cannot split `{s}`; separate multi-character letters with spaces"
            )));
        };
        pieces
            .iter()
            .map(|p| self.letter(p).ok_or_else(|| Error::UndeclaredLetter { line: 0, token: p.clone() }))
            .collect()
    }
}

/// A total self-map of an alphabet, stored as the image of each letter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterMap(pub Vec<Letter>);

impl LetterMap {
    pub fn identity(n: usize) -> Self {
        LetterMap((0..n as u32).map(Letter).collect())
    }

    #[inline]
    pub fn apply(&self, a: Letter) -> Letter {
        self.0[a.idx()]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LetterMap) -> LetterMap {
        LetterMap(other.0.iter().map(|&a| self.apply(a)).collect())
    }

    pub fn pow(&self, n: u64) -> LetterMap {
        let mut out = LetterMap::identity(self.0.len());
        for _ in 0..n {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self) == *self
    }

    pub fn fixed_letters(&self) -> Vec<Letter> {
        self.0.iter().enumerate().filter(|(i, a)| a.idx() == *i).map(|(_, &a)| a).collect()
    }
}

/// A non-erasing morphism from an alphabet to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
    constant_length: Option<usize>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} letters",
                images.len(),
                alphabet.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::EmptyImage { line: 0, token: alphabet.tokens[i].clone() });
            }
            if let Some(bad) = img.iter().find(|a| a.idx() >= alphabet.len()) {
                return Err(Error::AlphabetMismatch(format!("letter id {} out of range", bad.0)));
            }
        }
        let first = images[0].len();
        let constant_length = images.iter().all(|w| w.len() == first).then_some(first);
        Ok(Substitution { alphabet, images, constant_length })
    }

    /// Builds a substitution from `(letter, image)` pairs; the alphabet follows the pair order.
    ///
    /// ```
    /// let tm = symdyn::Substitution::from_rules(&[("0", "01"), ("1", "10")]).unwrap();
    /// assert_eq!(tm.constant_length(), Some(2));
    /// ```
    pub fn from_rules(rules: &[(&str, &str)]) -> Result<Self> {
        let alphabet = Alphabet::new(rules.iter().map(|(a, _)| *a))?;
        let images = rules.iter().map(|(_, img)| alphabet.parse_word(img)).collect::<Result<_>>()?;
        Substitution::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + Clone {
        self.alphabet.letters()
    }

    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.images[a.idx()]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn constant_length(&self) -> Option<usize> {
        self.constant_length
    }

    pub fn require_constant_length(&self) -> Result<usize> {
        self.constant_length.ok_or(Error::NotConstantLength)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(w.len() * self.max_image_len());
        for &a in w {
            out.extend_from_slice(self.image(a));
        }
        out
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = alphabet.letters().map(|a| vec![a]).collect();
        Substitution::new(alphabet, images).expect("identity is well formed")
    }

    /// `φ^n`; `φ^0` is the identity.
    pub fn power(&self, n: u32) -> Substitution {
        let mut out = Substitution::identity(self.alphabet.clone());
        for _ in 0..n {
            out = self.compose(&out);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        Substitution::new(self.alphabet.clone(), images).expect("composition of non-erasing maps")
    }

    /// `M[a][b]` = number of occurrences of `b` in the image of `a`.
    pub fn incidence(&self) -> Vec<Vec<u64>> {
        let n = self.size();
        let mut m = vec![vec![0u64; n]; n];
        for (a, img) in self.images.iter().enumerate() {
            for b in img {
                m[a][b.idx()] += 1;
            }
        }
        m
    }

    /// Letter ↦ first letter of its image.
    pub fn first_letter_map(&self) -> LetterMap {
        LetterMap(self.images.iter().map(|w| w[0]).collect())
    }

    /// Letter ↦ last letter of its image.
    pub fn last_letter_map(&self) -> LetterMap {
        LetterMap(self.images.iter().map(|w| *w.last().expect("non-empty image")).collect())
    }

    /// The column map `a ↦ φ(a)[i]` of a constant-length substitution.
    pub fn column(&self, i: usize) -> LetterMap {
        LetterMap(self.images.iter().map(|w| w[i]).collect())
    }

    /// Serialises in the line-oriented substitution file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("alphabet: {}\n", self.alphabet.tokens.join(" "));
        for a in self.letters() {
            let img: Vec<&str> = self.image(a).iter().map(|&b| self.alphabet.token(b)).collect();
            s.push_str(&format!("map {} -> {}\n", self.alphabet.token(a), img.join(" ")));
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters()
            .map(|a| format!("{}→{}", self.alphabet.token(a), self.alphabet.render(self.image(a))))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A letter-to-letter morphism between two alphabets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coding {
    source: Alphabet,
    target: Alphabet,
    map: Vec<Letter>,
}

impl Coding {
    pub fn new(source: Alphabet, target: Alphabet, map: Vec<Letter>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::PartialCoding(source.tokens.get(map.len()).cloned().unwrap_or_default()));
        }
        if map.iter().any(|b| b.idx() >= target.len()) {
            return Err(Error::AlphabetMismatch("coding target out of range".into()));
        }
        Ok(Coding { source, target, map })
    }

    /// Builds a coding from token pairs; the target alphabet is inferred in order of appearance.
    pub fn from_pairs(source: &Alphabet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut targets: Vec<String> = Vec::new();
        for (_, t) in pairs {
            if !targets.iter().any(|x| x == t) {
                targets.push((*t).to_owned());
            }
        }
        let target = Alphabet::new(targets)?;
        let mut map = vec![None; source.len()];
        for (s, t) in pairs {
            let a = source.letter(s).ok_or_else(|| Error::UndeclaredLetter { line: 0, token: (*s).into() })?;
            map[a.idx()] = target.letter(t);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| Error::PartialCoding(source.tokens[i].clone())))
            .collect::<Result<_>>()?;
        Coding::new(source.clone(), target, map)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Coding { source: alphabet.clone(), target: alphabet.clone(), map: alphabet.letters().collect() }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    #[inline]
    pub fn apply_letter(&self, a: Letter) -> Letter {
        self.map[a.idx()]
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        w.iter().map(|&a| self.apply_letter(a)).collect()
    }

    pub fn to_text(&self) -> String {
        self.source
            .letters()
            .map(|a| format!("coding {} -> {}\n", self.source.token(a), self.target.token(self.apply_letter(a))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm() -> Substitution {
        Substitution::from_rules(&[("0", "01"), ("1", "10")]).unwrap()
    }

    #[test]
    fn thue_morse_fourth_power() {
        let p = tm().power(4);
        let a = tm().alphabet().clone();
        assert_eq!(a.render(p.image(Letter(0))), "0110100110010110");
        assert_eq!(a.render(p.image(Letter(1))), "1001011001101001");
    }

    #[test]
    fn zeroth_power_is_identity() {
        let w = vec![Letter(1), Letter(0), Letter(0)];
        assert_eq!(tm().power(0).apply(&w), w);
    }

    #[test]
    fn letter_maps_follow_powers() {
        let phi = Substitution::from_rules(&[("0", "12"), ("1", "22"), ("2", "11")]).unwrap();
        for n in 0..5 {
            assert_eq!(phi.power(n).first_letter_map(), phi.first_letter_map().pow(n as u64));
            assert_eq!(phi.power(n).last_letter_map(), phi.last_letter_map().pow(n as u64));
        }
    }

    #[test]
    fn rendering_multi_character_tokens() {
        let a = Alphabet::new(["ab", "c"]).unwrap();
        let w = a.parse_word("ab c ab").unwrap();
        assert_eq!(a.render(&w), "ab c ab");
        assert!(a.parse_word("abc").is_err());
    }

    #[test]
    fn coding_infers_target() {
        let a = Alphabet::new(["0", "1", "2", "3"]).unwrap();
        let c = Coding::from_pairs(&a, &[("0", "0"), ("1", "1"), ("2", "2"), ("3", "2")]).unwrap();
        assert_eq!(c.target().len(), 3);
        assert!(Coding::from_pairs(&a, &[("0", "0")]).is_err());
    }
}
