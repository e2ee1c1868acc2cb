//! The language of the two-sided subshift generated by a substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use crate::morphism::{Letter, Substitution, Word};

pub type Pair = (Letter, Letter);

fn pairs_of(w: &[Letter], out: &mut BTreeSet<Pair>) {
    for p in w.windows(2) {
        out.insert((p[0], p[1]));
    }
}

fn image_pairs(phi: &Substitution, set: &BTreeSet<Pair>) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for &(a, b) in set {
        pairs_of(&phi.apply(&[a, b]), &mut out);
    }
    out
}

/// Length-two words of the subshift.
///
/// Starts from the pairs reachable from letter images and repeatedly drops any pair that is
/// not a factor of `φ(S)` or that has no left or no right neighbour in `S`. A pair such as
/// `01` under `0 ↦ 00, 1 ↦ 01` occurs in every `φ^n(1)` but cannot be extended past the
/// final `1`, so it is not a factor of any bi-infinite point.
pub fn pair_language(phi: &Substitution) -> BTreeSet<Pair> {
    let mut reach = BTreeSet::new();
    for a in phi.letters() {
        pairs_of(phi.image(a), &mut reach);
    }
    loop {
        let mut next = reach.clone();
        next.extend(image_pairs(phi, &reach));
        if next.len() == reach.len() {
            break;
        }
        reach = next;
    }
    let mut sust = reach;
    loop {
        let img = image_pairs(phi, &sust);
        let ends: BTreeSet<Letter> = sust.iter().map(|p| p.1).collect();
        let starts: BTreeSet<Letter> = sust.iter().map(|p| p.0).collect();
        let next: BTreeSet<Pair> = sust
            .iter()
            .filter(|p| img.contains(p) && ends.contains(&p.0) && starts.contains(&p.1))
            .copied()
            .collect();
        if next.len() == sust.len() {
            return sust;
        }
        sust = next;
    }
}

/// Words of length `1..=max_len` in the language.
///
/// Factors of length `≤ L` of `φ(w)` only involve factors of `w` of length `≤ L`, so the
/// union over `n` of the factors of `φ^n(ab)`, `ab` in the pair language, is a closure over
/// a finite set. The union is increasing in `n` because every pair is sustained.
pub fn language(phi: &Substitution, max_len: usize) -> BTreeSet<Word> {
    let mut words: BTreeSet<Word> = BTreeSet::new();
    let mut todo: Vec<Word> = Vec::new();
    let add = |w: &[Letter], words: &mut BTreeSet<Word>, todo: &mut Vec<Word>| {
        for len in 1..=max_len.min(w.len()) {
            for f in w.windows(len) {
                if !words.contains(f) {
                    words.insert(f.to_vec());
                    todo.push(f.to_vec());
                }
            }
        }
    };
    for (a, b) in pair_language(phi) {
        add(&[a, b], &mut words, &mut todo);
    }
    while let Some(u) = todo.pop() {
        let img = phi.apply(&u);
        add(&img, &mut words, &mut todo);
    }
    words
}

/// Letters of the subshift (`L¹`).
pub fn letters(phi: &Substitution) -> BTreeSet<Letter> {
    pair_language(phi).into_iter().flat_map(|(a, b)| [a, b]).collect()
}

pub fn contains(phi: &Substitution, w: &[Letter]) -> bool {
    match w.len() {
        0 => true,
        1 => letters(phi).contains(&w[0]),
        2 => pair_language(phi).contains(&(w[0], w[1])),
        n => language(phi, n).contains(w),
    }
}

/// Pair language plus memoized factor sets, safe to share between threads.
#[derive(Debug)]
pub struct LanguageTable {
    phi: Substitution,
    pairs: BTreeSet<Pair>,
    factors: Mutex<BTreeMap<usize, Arc<BTreeSet<Word>>>>,
}

impl LanguageTable {
    pub fn new(phi: &Substitution) -> Self {
        LanguageTable { pairs: pair_language(phi), phi: phi.clone(), factors: Mutex::new(BTreeMap::new()) }
    }

    pub fn pairs(&self) -> &BTreeSet<Pair> {
        &self.pairs
    }

    pub fn has_pair(&self, a: Letter, b: Letter) -> bool {
        self.pairs.contains(&(a, b))
    }

    /// All factors of length `≤ max_len`.
    pub fn up_to(&self, max_len: usize) -> Arc<BTreeSet<Word>> {
        let mut memo = self.factors.lock().expect("language memo poisoned");
        if let Some((_, set)) = memo.range(max_len..).next() {
            if set.iter().all(|w| w.len() <= max_len) {
                return Arc::clone(set);
            }
            let cut: BTreeSet<Word> = set.iter().filter(|w| w.len() <= max_len).cloned().collect();
            return Arc::new(cut);
        }
        let set = Arc::new(language(&self.phi, max_len));
        memo.insert(max_len, Arc::clone(&set));
        set
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        match w.len() {
            0 => true,
            2 => self.has_pair(w[0], w[1]),
            n => self.up_to(n).contains(w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(rules: &[(&str, &str)]) -> Substitution {
        Substitution::from_rules(rules).unwrap()
    }

    fn w(phi: &Substitution, s: &str) -> Word {
        phi.alphabet().parse_word(s).unwrap()
    }

    /// Brute-force oracle: factors of `φ^n(a)` over all letters, for `n` in a range.
    fn factors_of_iterates(phi: &Substitution, len: usize, n_lo: u32, n_hi: u32) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for n in n_lo..=n_hi {
            let p = phi.power(n);
            for a in phi.letters() {
                for f in p.image(a).windows(len) {
                    out.insert(f.to_vec());
                }
            }
        }
        out
    }

    #[test]
    fn remark_pairs_exclude_zero() {
        let phi = sub(&[("0", "12"), ("1", "22"), ("2", "11")]);
        let pairs: BTreeSet<String> =
            pair_language(&phi).iter().map(|&(a, b)| phi.alphabet().render(&[a, b])).collect();
        let expected: BTreeSet<String> = ["11", "12", "21", "22"].iter().map(|s| s.to_string()).collect();
        assert_eq!(pairs, expected);
        assert_eq!(letters(&phi), BTreeSet::from([Letter(1), Letter(2)]));
        assert!(!contains(&phi, &w(&phi, "0")));
    }

    #[test]
    fn thue_morse_pairs_and_factors() {
        let tm = sub(&[("0", "01"), ("1", "10")]);
        assert_eq!(pair_language(&tm).len(), 4);
        assert!(!contains(&tm, &w(&tm, "000")));
        assert!(contains(&tm, &w(&tm, "0110")));
        for len in 1..=8 {
            let lang: BTreeSet<Word> = language(&tm, 8).into_iter().filter(|x| x.len() == len).collect();
            assert_eq!(lang, factors_of_iterates(&tm, len, 1, 8), "length {len}");
        }
    }

    #[test]
    fn doubling_has_one_pair() {
        let phi = sub(&[("a", "aa")]);
        assert_eq!(pair_language(&phi), BTreeSet::from([(Letter(0), Letter(0))]));
    }

    #[test]
    fn primitive_pairs_match_iterate() {
        for rules in [
            vec![("0", "0123"), ("1", "1031"), ("2", "2332"), ("3", "3223")],
            vec![("a", "b"), ("b", "c"), ("c", "ab")],
            vec![("0", "01100"), ("1", "10011")],
        ] {
            let phi = sub(&rules);
            if !crate::analysis::is_primitive(&phi) {
                continue;
            }
            let mut n = 1;
            while phi.letters().all(|a| phi.power(n + 1).image(a).len() < 50_000) {
                n += 1;
            }
            let iterate: BTreeSet<Pair> = factors_of_iterates(&phi, 2, n, n).iter().map(|p| (p[0], p[1])).collect();
            assert_eq!(pair_language(&phi), iterate);
        }
    }

    #[test]
    fn non_extendable_pair_is_dropped() {
        let phi = sub(&[("0", "00"), ("1", "01")]);
        assert_eq!(pair_language(&phi), BTreeSet::from([(Letter(0), Letter(0))]));
        assert!(!contains(&phi, &w(&phi, "01")));
    }

    /// Oracle: middle pairs of factors of length `2·ctx + 2` of `φ^n(a)`, i.e. pairs with
    /// `ctx` letters of context on both sides.
    #[test]
    fn pairs_match_extendable_factors_on_corpus() {
        let ctx = 10;
        for phi in crate::corpus::constant_length_corpus(2, 3) {
            let mut oracle = BTreeSet::new();
            for f in factors_of_iterates(&phi, 2 * ctx + 2, 1, 12) {
                oracle.insert((f[ctx], f[ctx + 1]));
            }
            assert_eq!(pair_language(&phi), oracle, "{}", phi.to_text());
        }
    }

    #[test]
    fn memo_table_agrees() {
        let tm = sub(&[("0", "01"), ("1", "10")]);
        let t = LanguageTable::new(&tm);
        let big = t.up_to(6);
        let small = t.up_to(4);
        assert_eq!(*small, language(&tm, 4));
        assert!(small.len() < big.len());
        assert!(t.contains(&w(&tm, "01101")));
    }
}
