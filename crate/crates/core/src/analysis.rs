//! Structural properties of a substitution: growth, primitivity, prolongability.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::morphism::{Alphabet, Letter, LetterMap, Substitution};

/// First/last letter maps and the letters that generate one-sided fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongabilityProfile {
    pub first: LetterMap,
    pub last: LetterMap,
    /// Letters `a` with `φ(a)` starting with `a`.
    pub right_prolongable: Vec<Letter>,
    /// Letters `b` with `φ(b)` ending with `b`.
    pub left_prolongable: Vec<Letter>,
    /// Least `n ≥ 1` such that `φ^n` is ambi-idempotent.
    pub n_amb: u64,
    /// The a-priori bound `|A|!` on `n_amb`.
    pub n_amb_bound: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub profile: ProlongabilityProfile,
    pub growing: bool,
    pub bounded_letters: Vec<Letter>,
    pub constant_length: Option<usize>,
    pub primitive: bool,
}

pub fn analyze(phi: &Substitution) -> Analysis {
    let bounded_letters = bounded_letters(phi);
    Analysis {
        profile: prolongability(phi),
        growing: bounded_letters.is_empty(),
        bounded_letters,
        constant_length: phi.constant_length(),
        primitive: is_primitive(phi),
    }
}

pub fn prolongability(phi: &Substitution) -> ProlongabilityProfile {
    let first = phi.first_letter_map();
    let last = phi.last_letter_map();
    let mut n = 1u64;
    loop {
        let f = first.pow(n);
        let g = last.pow(n);
        if f.is_idempotent() && g.is_idempotent() {
            break;
        }
        n += 1;
    }
    let n_amb_bound = (1..=phi.size() as u64).map(BigUint::from).product();
    ProlongabilityProfile {
        right_prolongable: first.fixed_letters(),
        left_prolongable: last.fixed_letters(),
        first,
        last,
        n_amb: n,
        n_amb_bound,
    }
}

fn letters_of(phi: &Substitution, set: &[bool]) -> Vec<bool> {
    let mut out = vec![false; set.len()];
    for (i, &on) in set.iter().enumerate() {
        if on {
            for b in phi.image(Letter(i as u32)) {
                out[b.idx()] = true;
            }
        }
    }
    out
}

/// Letters whose iterated images stay bounded in length.
///
/// `B` is the largest set of letters mapped to a single letter of `B`; a letter is bounded
/// iff every set in the eventual cycle of `letters(φ^n(a))` lies in `B`.
pub fn bounded_letters(phi: &Substitution) -> Vec<Letter> {
    let n = phi.size();
    let mut in_b: Vec<bool> = phi.letters().map(|a| phi.image(a).len() == 1).collect();
    loop {
        let next: Vec<bool> = phi.letters().map(|a| in_b[a.idx()] && in_b[phi.image(a)[0].idx()]).collect();
        if next == in_b {
            break;
        }
        in_b = next;
    }
    let mut out = Vec::new();
    for a in phi.letters() {
        let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut seq: Vec<Vec<bool>> = Vec::new();
        let mut cur = vec![false; n];
        cur[a.idx()] = true;
        let start = loop {
            if let Some(&i) = seen.get(&cur) {
                break i;
            }
            seen.insert(cur.clone(), seq.len());
            seq.push(cur.clone());
            cur = letters_of(phi, &cur);
        };
        let bounded = seq[start..].iter().all(|s| s.iter().zip(&in_b).all(|(&x, &b)| !x || b));
        if bounded {
            out.push(a);
        }
    }
    out
}

pub fn is_growing(phi: &Substitution) -> bool {
    bounded_letters(phi).is_empty()
}

pub fn require_growing(phi: &Substitution) -> Result<()> {
    let bounded = bounded_letters(phi);
    if bounded.is_empty() {
        Ok(())
    } else {
        let toks: Vec<&str> = bounded.iter().map(|&a| phi.alphabet().token(a)).collect();
        Err(Error::NotGrowing(toks.join(" ")))
    }
}

/// Some power of the incidence matrix is positive; checked up to Wielandt's bound.
pub fn is_primitive(phi: &Substitution) -> bool {
    let n = phi.size();
    let m: Vec<Vec<bool>> = phi.incidence().iter().map(|row| row.iter().map(|&c| c > 0).collect()).collect();
    let mut p = m.clone();
    let bound = (n - 1) * (n - 1) + 1;
    for _ in 0..bound {
        if p.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|l| p[i][l] && m[l][j])).collect())
            .collect();
    }
    false
}

/// Letters occurring in `φ^n(b)` for some `n ≥ 0`.
pub fn reachable_alphabet(phi: &Substitution, b: Letter) -> BTreeSet<Letter> {
    let mut seen = BTreeSet::from([b]);
    let mut stack = vec![b];
    while let Some(a) = stack.pop() {
        for &c in phi.image(a) {
            if seen.insert(c) {
                stack.push(c);
            }
        }
    }
    seen
}

/// `φ` restricted to a closed letter set, over the sub-alphabet (tokens kept, original order).
pub fn restrict(phi: &Substitution, subset: &BTreeSet<Letter>) -> Result<Substitution> {
    if subset.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    if subset.iter().any(|&a| phi.image(a).iter().any(|b| !subset.contains(b))) {
        return Err(Error::NotClosed);
    }
    let alphabet = Alphabet::new(subset.iter().map(|&a| phi.alphabet().token(a).to_owned()))?;
    let images = subset
        .iter()
        .map(|&a| {
            phi.image(a)
                .iter()
                .map(|&b| alphabet.letter(phi.alphabet().token(b)).expect("closed subset"))
                .collect()
        })
        .collect();
    Substitution::new(alphabet, images)
}
