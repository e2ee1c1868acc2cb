//! Exhaustive families of small substitutions, used as test corpora.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::morphism::{Alphabet, Letter, Substitution, Word};

/// The images of a substitution after renaming its letters by `perm` (`a ↦ perm[a]`).
fn renamed(images: &[Word], perm: &[usize]) -> Vec<Word> {
    let mut out = vec![Vec::new(); images.len()];
    for (a, img) in images.iter().enumerate() {
        out[perm[a]] = img.iter().map(|b| Letter(perm[b.idx()] as u32)).collect();
    }
    out
}

/// Least renaming of the images, in lexicographic order of the image lists.
fn canonical(images: &[Word]) -> Vec<Word> {
    (0..images.len())
        .permutations(images.len())
        .map(|perm| renamed(images, &perm))
        .min()
        .expect("at least one permutation")
}

/// All substitutions of constant length `k` on alphabets `0, 1, …` of size `1..=max_letters`,
/// one per class under renaming of letters, in a fixed order.
pub fn constant_length_corpus(k: usize, max_letters: usize) -> Vec<Substitution> {
    let mut out = Vec::new();
    for n in 1..=max_letters {
        let alphabet = Alphabet::new((0..n).map(|i| i.to_string())).expect("digit tokens");
        let words: Vec<Word> = (0..k)
            .map(|_| (0..n as u32).map(Letter))
            .multi_cartesian_product()
            .collect();
        let mut seen: BTreeSet<Vec<Word>> = BTreeSet::new();
        for images in (0..n).map(|_| words.iter().cloned()).multi_cartesian_product() {
            let key = canonical(&images);
            if seen.insert(key.clone()) {
                out.push(Substitution::new(alphabet.clone(), key).expect("valid images"));
            }
        }
    }
    out
}
