//! One-sided quasi-fixed points, always handled through a two-sided parent.

use std::fmt;

use crate::desub::{self, DesubStep, FactorizationCount};
use crate::error::{Error, Result};
use crate::language::LanguageTable;
use crate::morphism::{Alphabet, Letter, Substitution, Word};
use crate::quasifix::{enumerate_seeds, Qfp, Relation};
use crate::window::Window;

/// The one-sided sequence `(z_{start+n})_{n≥0}` of a two-sided quasi-fixed point `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSidedQfp {
    pub parent: Qfp,
    pub start: i64,
}

impl OneSidedQfp {
    pub fn new(parent: Qfp, start: i64) -> Self {
        OneSidedQfp { parent, start }
    }

    /// The first `len` letters.
    pub fn prefix(&self, phi: &Substitution, len: usize) -> Result<Word> {
        if len == 0 {
            return Ok(Vec::new());
        }
        Ok(self.parent.materialize(phi, self.start, self.start + len as i64 - 1)?.into_letters())
    }

    /// `T^c(φ^m(x)) = x` for the one-sided sequence, with the signed reading for `c < 0`.
    pub fn relation(&self, phi: &Substitution) -> Result<Relation> {
        self.parent.shifted(self.start).relation(phi)
    }

    /// Checks the relation on the first `len` letters, using only the one-sided sequence.
    pub fn verify(&self, phi: &Substitution, len: usize) -> Result<bool> {
        let rel = self.relation(phi)?;
        let x = self.prefix(phi, len + rel.offset.unsigned_abs() as usize + 1)?;
        Ok(satisfies_onesided(phi, rel, &x, len))
    }

    /// The point as a window starting at 0, rendered with a `start=<p>` header.
    pub fn to_text(&self, phi: &Substitution, len: usize) -> Result<String> {
        let w = self.prefix(phi, len)?;
        Ok(format!("start={}\n{}\n{}", self.start, self.parent.to_text(phi.alphabet()).trim_end(), phi.alphabet().render(&w)))
    }
}

/// Whether `x` agrees with `T^c(φ^m(x))` on its first `len` letters, as far as `x` determines it.
fn satisfies_onesided(phi: &Substitution, rel: Relation, x: &[Letter], len: usize) -> bool {
    let image = phi.power(rel.period).apply(x);
    let c = rel.offset;
    (0..len as i64).all(|n| {
        let (i, j) = if c >= 0 { (n, n + c) } else { (n - c, n) };
        match (x.get(i as usize), image.get(j as usize)) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    })
}

/// Evidence that the prefix satisfies the relation: enough of `φ^m(prefix)` overlaps the prefix.
fn check_evidence(phi: &Substitution, m: u32, c: i64, prefix: &[Letter]) -> Result<()> {
    let image_len = phi.power(m).apply(prefix).len() as i64;
    let overlap = if c >= 0 { image_len - c } else { prefix.len() as i64 + c };
    if overlap <= 0 {
        return Err(Error::Undetermined("prefix too short to witness the relation".into()));
    }
    if !satisfies_onesided(phi, Relation { period: m, offset: c }, prefix, prefix.len()) {
        return Err(Error::InvalidArgument(format!("the prefix does not satisfy T^{c}(φ^{m}(x)) = x")));
    }
    Ok(())
}

/// Upper bound on how far a seed point is shifted while searching for a given offset.
const MAX_SHIFT_SEARCH: i64 = 1 << 16;

/// Shifts `t` of the seed point whose relation offset equals `c`. Offsets are monotone in `t`
/// (`c(t+1) - c(t) = 1 - |φ^m(z_t)| ≤ 0`), so the scan stops once it passes `c`.
fn shifts_with_offset(phi: &Substitution, base: &Qfp, c: i64) -> Result<Vec<i64>> {
    let m = base.seed.period;
    let pm = phi.power(m);
    let c0 = base.relation(phi)?.offset;
    if let Some(k) = phi.constant_length() {
        let drift = 1 - (k as i64).pow(m);
        return Ok(if (c - c0) % drift == 0 { vec![(c - c0) / drift] } else { Vec::new() });
    }
    let mut out = Vec::new();
    if c == c0 {
        out.push(0);
    }
    let mut chunk = 256i64;
    // Right: c(t) = c0 + t - |φ^m(z[0,t))|.
    let (mut t, mut cur) = (0i64, c0);
    'right: while cur > c && t < MAX_SHIFT_SEARCH {
        let w = base.materialize(phi, t, t + chunk - 1)?;
        for &a in w.letters() {
            cur += 1 - pm.image(a).len() as i64;
            t += 1;
            if cur == c {
                out.push(t);
            }
            if cur < c {
                break 'right;
            }
        }
        chunk *= 2;
    }
    // Left: c(t) = c0 + t + |φ^m(z[t,0))|.
    let (mut t, mut cur) = (0i64, c0);
    let mut chunk = 256i64;
    'left: while cur < c && t > -MAX_SHIFT_SEARCH {
        let w = base.materialize(phi, t - chunk, t - 1)?;
        for &a in w.letters().iter().rev() {
            cur += pm.image(a).len() as i64 - 1;
            t -= 1;
            if cur == c {
                out.push(t);
            }
            if cur > c {
                break 'left;
            }
        }
        chunk *= 2;
    }
    Ok(out)
}

/// Extends a one-sided point with `T^c(φ^m(x)) = x`, known through a prefix, to a two-sided
/// quasi-fixed point. Among all seeds of period `m` and shifts that reproduce the prefix with
/// this relation, points in the subshift come first, then smaller shifts, then seed order.
pub fn prolong_two_sided(phi: &Substitution, m: u32, c: i64, prefix: &[Letter]) -> Result<OneSidedQfp> {
    if prefix.is_empty() {
        return Err(Error::InvalidArgument("empty prefix".into()));
    }
    check_evidence(phi, m, c, prefix)?;
    let len = prefix.len() as i64;
    let mut best: Option<((bool, u64, usize), Qfp)> = None;
    for (order, seed) in enumerate_seeds(phi, m)?.into_iter().enumerate() {
        let base = Qfp::new(seed);
        for t in shifts_with_offset(phi, &base, c)? {
            let q = base.shifted(t);
            if q.materialize(phi, 0, len - 1)?.letters() != prefix {
                continue;
            }
            let key = (!q.seed.in_system, t.unsigned_abs(), order);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, q));
            }
        }
    }
    best.map(|(_, q)| OneSidedQfp::new(q, 0))
        .ok_or_else(|| Error::Undetermined(format!("no seed of period {m} reproduces the prefix with offset {c}")))
}

/// Longest factor length checked against the language for one-sided predecessors.
const LANGUAGE_CHECK_LEN: usize = 16;

fn plausible(lang: &LanguageTable, w: &[Letter]) -> bool {
    let h = w.len().min(LANGUAGE_CHECK_LEN);
    h == 0 || w.windows(h).all(|f| lang.contains(f))
}

/// All ways to write the one-sided prefix `x` as `T^c(φ(x'))` with `0 ≤ c < |φ(x'_0)|`; the last
/// block of `x'` may be only partly visible. Several steps may exist even for nonperiodic points.
pub fn onesided_desub(phi: &Substitution, x: &[Letter]) -> Vec<DesubStep> {
    let lang = LanguageTable::new(phi);
    let mut out = Vec::new();
    for a in phi.letters() {
        let img = phi.image(a);
        for c in 0..img.len() {
            let head = &img[c..];
            let n = head.len().min(x.len());
            if head[..n] != x[..n] {
                continue;
            }
            let mut stack = vec![(vec![a], n)];
            while let Some((pred, pos)) = stack.pop() {
                if !plausible(&lang, &pred) {
                    continue;
                }
                if pos == x.len() {
                    out.push(DesubStep { c, pred: Window::new(0, pred) });
                    continue;
                }
                for b in phi.letters() {
                    let img = phi.image(b);
                    let n = img.len().min(x.len() - pos);
                    if img[..n] == x[pos..pos + n] {
                        let mut next = pred.clone();
                        next.push(b);
                        stack.push((next, pos + n));
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Largest family of pairwise-disjoint `W`-interpretations of a one-sided window, whose first
/// block may be a proper suffix of a word of `W`.
pub fn interpretation_count(y: &[Letter], words: &[Word]) -> Result<FactorizationCount> {
    desub::count_from(&Window::new(0, y.to_vec()), words, true)
}

/// A one-sided window printed with its `start=<p>` header.
pub struct OneSidedWindow<'a> {
    pub start: i64,
    pub letters: &'a [Letter],
    pub alphabet: &'a Alphabet,
}

impl fmt::Display for OneSidedWindow<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "start={} {}", self.start, self.alphabet.render(self.letters))
    }
}

/// Parses `start=<p> <letters>`; the header is optional and defaults to 0.
pub fn parse_onesided_window(alphabet: &Alphabet, s: &str) -> Result<(i64, Word)> {
    let s = s.trim();
    match s.strip_prefix("start=") {
        Some(r) => {
            let (num, rest) = r.split_once(char::is_whitespace).unwrap_or((r, ""));
            let p = num.parse::<i64>().map_err(|_| Error::InvalidArgument(format!("bad start `{num}`")))?;
            Ok((p, alphabet.parse_word(rest)?))
        }
        None => Ok((0, alphabet.parse_word(s)?)),
    }
}
