//! Desubstitution `x = T^c(φ(x′))`, digit streams of quasi-fixed points, recovery of
//! quasi-fixed points from raw windows, and W-factorization counts.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::kadic::DigitExpansion;
use crate::language::LanguageTable;
use crate::morphism::{Letter, Substitution, Word};
use crate::quasifix::{self, enumerate_seeds, Qfp, Relation};
use crate::window::Window;

/// One way of writing a window as `T^c(φ(pred))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DesubStep {
    /// Offset of position 0 inside the image of `pred_0`.
    pub c: usize,
    /// Letters whose images lie entirely inside the window; position 0 is the letter whose
    /// image covers position 0 of the input.
    pub pred: Window,
}

/// Cut-aligned parses of `letters[from..]` into full images, ending with a possibly partial image.
fn parse_right(phi: &Substitution, letters: &[Letter], from: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Word)> = vec![(from, Vec::new())];
    while let Some((pos, acc)) = stack.pop() {
        if pos == letters.len() {
            out.push(acc);
            continue;
        }
        let rest = &letters[pos..];
        let mut partial_ok = false;
        for a in phi.letters().rev() {
            let img = phi.image(a);
            if img.len() <= rest.len() {
                if &rest[..img.len()] == img {
                    let mut next = acc.clone();
                    next.push(a);
                    stack.push((pos + img.len(), next));
                }
            } else if img.starts_with(rest) {
                partial_ok = true;
            }
        }
        if partial_ok {
            out.push(acc);
        }
    }
    out
}

/// Parses of `letters[..to]` ending exactly at `to`, starting with a possibly partial image.
/// Returned words are in left-to-right order.
fn parse_left(phi: &Substitution, letters: &[Letter], to: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Word)> = vec![(to, Vec::new())];
    while let Some((pos, acc)) = stack.pop() {
        if pos == 0 {
            out.push(acc.iter().rev().copied().collect());
            continue;
        }
        let rest = &letters[..pos];
        let mut partial_ok = false;
        for a in phi.letters().rev() {
            let img = phi.image(a);
            if img.len() <= rest.len() {
                if &rest[rest.len() - img.len()..] == img {
                    let mut next = acc.clone();
                    next.push(a);
                    stack.push((pos - img.len(), next));
                }
            } else if img.ends_with(rest) {
                partial_ok = true;
            }
        }
        if partial_ok {
            out.push(acc.iter().rev().copied().collect());
        }
    }
    out
}

/// All `(c, pred)` with `T^c(φ(pred))` equal to the window on the overlap and every pair of
/// `pred` in the language. An empty result means the window is not in the language, or is
/// too short to contain the image covering position 0.
pub fn desubstitute_window(phi: &Substitution, lang: &LanguageTable, w: &Window) -> Vec<DesubStep> {
    let letters = w.letters();
    let Some(origin) = (0i64).checked_sub(w.lo()).filter(|&o| o >= 0 && o < letters.len() as i64) else {
        return Vec::new();
    };
    let origin = origin as usize;
    let mut out = BTreeSet::new();
    for a in phi.letters() {
        let img = phi.image(a);
        for c in 0..img.len() {
            if c > origin || origin - c + img.len() > letters.len() {
                continue;
            }
            let start = origin - c;
            if &letters[start..start + img.len()] != img {
                continue;
            }
            let rights = parse_right(phi, letters, start + img.len());
            if rights.is_empty() {
                continue;
            }
            let lefts = parse_left(phi, letters, start);
            for l in &lefts {
                for r in &rights {
                    let mut pred = l.clone();
                    pred.push(a);
                    pred.extend_from_slice(r);
                    if pred.windows(2).all(|p| lang.has_pair(p[0], p[1])) {
                        out.insert(DesubStep { c, pred: Window::new(-(l.len() as i64), pred) });
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// The digit chain of a quasi-fixed point of a constant-length substitution.
///
/// Element `j` is a symbolic point `z^j` with `z^j = T^{c_j}(φ(z^{j+1}))`; indices wrap from
/// `transient + cycle` back to `transient`, and the wrap is a repetition of points, not only
/// of digits.
#[derive(Clone, Debug)]
pub struct Chain {
    pub base: u32,
    pub digits: Vec<u32>,
    pub transient: usize,
    pub elements: Vec<Qfp>,
}

impl Chain {
    pub fn cycle_len(&self) -> usize {
        self.digits.len() - self.transient
    }

    pub fn next_index(&self, j: usize) -> usize {
        if j + 1 == self.digits.len() {
            self.transient
        } else {
            j + 1
        }
    }

    pub fn expansion(&self) -> DigitExpansion {
        DigitExpansion::new(self.base, self.digits[..self.transient].to_vec(), self.digits[self.transient..].to_vec())
            .expect("digits below base")
    }

    /// `s_n = Σ_{i<n} c_i k^i`.
    pub fn partial_sum(&self, n: usize) -> i128 {
        let mut j = 0;
        let mut s = 0i128;
        let mut scale = 1i128;
        for _ in 0..n {
            s += self.digits[j] as i128 * scale;
            scale *= self.base as i128;
            j = self.next_index(j);
        }
        s
    }

    pub fn element(&self, n: usize) -> &Qfp {
        let mut j = 0;
        for _ in 0..n {
            j = self.next_index(j);
        }
        &self.elements[j]
    }
}

/// Builds the chain by exact offset arithmetic on the symbolic representation
/// `T^e(φ^p(T^u(seed point)))`; a state repeats exactly when the chain point repeats.
pub fn digit_chain(phi: &Substitution, q: &Qfp) -> Result<Chain> {
    let k = phi.require_constant_length()? as i64;
    let m = q.seed.period;
    let big_k = k.checked_pow(m).ok_or(Error::Overflow("k^m"))?;
    let c0 = q.seed.base_offset() as i64;
    let normalize = |u: i64| -> Result<(i64, u32, i64)> {
        let e = u.checked_mul(1 - big_k).and_then(|x| x.checked_add(c0)).ok_or(Error::Overflow("chain offset"))?;
        Ok((e, m, u))
    };
    let mut state = if q.power >= 1 { (q.shift, q.power, 0) } else { normalize(q.shift)? };
    let mut seen: HashMap<(i64, u32, i64), usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut elements = Vec::new();
    let transient = loop {
        if let Some(&i) = seen.get(&state) {
            break i;
        }
        seen.insert(state, digits.len());
        let (e, p, u) = state;
        let kp = k.checked_pow(p).ok_or(Error::Overflow("k^p"))?;
        let shift = u.checked_mul(kp).and_then(|x| x.checked_add(e)).ok_or(Error::Overflow("chain shift"))?;
        elements.push(Qfp { seed: q.seed.clone(), power: p, shift });
        let d = e.rem_euclid(k);
        digits.push(d as u32);
        let e2 = e.div_euclid(k);
        state = if p == 1 { normalize(u + e2)? } else { (e2, p - 1, u) };
    };
    Ok(Chain { base: k as u32, digits, transient, elements })
}

/// Digit stream of a quasi-fixed point, flagged when the point is shift-periodic
/// (desubstitution of periodic points need not be unique).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesubDigits {
    pub expansion: DigitExpansion,
    pub periodic: Option<u64>,
}

pub fn desub_digits(phi: &Substitution, q: &Qfp) -> Result<DesubDigits> {
    let chain = digit_chain(phi, q)?;
    let bound = quasifix::default_period_bound(phi, q.seed.period);
    Ok(DesubDigits { expansion: chain.expansion(), periodic: quasifix::shift_period(phi, q, bound)? })
}

/// Result of trying to recognise a window as part of a quasi-fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    /// A certified point reproducing the whole window, with its relation and the digits read.
    Found { point: Qfp, relation: Relation, digits: Vec<u32>, level: usize },
    /// Desubstitution branched at `level`.
    Ambiguous { level: usize, branches: Vec<DesubStep> },
    /// No repetition of predecessor content up to the given depth.
    NoRepetition { depth: usize },
    /// The window became too short, or left the language, at `level`.
    Exhausted { level: usize },
}

/// Smallest radius at which two predecessor windows are compared for repetition. Every short
/// window agrees with some quasi-fixed point, so deep levels with tiny windows are not compared.
pub const MIN_COMPARE_RADIUS: i64 = 32;

/// Iterates desubstitution on a window and looks for a repeated predecessor; a repetition
/// between levels `i < j` proposes a point of period `j - i`, which is certified against the
/// input before being reported.
pub fn detect_qfp(phi: &Substitution, w: &Window, depth: usize) -> Result<Detection> {
    let k = phi.require_constant_length()? as i64;
    let lang = LanguageTable::new(phi);
    let mut levels: Vec<Window> = vec![w.clone()];
    let mut digits: Vec<u32> = Vec::new();
    let mut rejected: BTreeSet<(usize, usize)> = BTreeSet::new();
    for level in 0..depth {
        let steps = desubstitute_window(phi, &lang, &levels[level]);
        match steps.len() {
            0 => return Ok(Detection::Exhausted { level }),
            1 => {}
            _ => return Ok(Detection::Ambiguous { level, branches: steps }),
        }
        let step = steps.into_iter().next().expect("one step");
        digits.push(step.c as u32);
        levels.push(step.pred);
        let j = levels.len() - 1;
        for i in 0..j {
            let radius = central_radius(&levels[i]).min(central_radius(&levels[j]));
            if radius < MIN_COMPARE_RADIUS || rejected.contains(&(i, j)) {
                continue;
            }
            if levels[i].slice(-radius, radius) != levels[j].slice(-radius, radius) {
                continue;
            }
            if let Some(found) = certify(phi, w, &levels[i], &digits, i, j, k)? {
                return Ok(found);
            }
            rejected.insert((i, j));
        }
    }
    Ok(Detection::NoRepetition { depth })
}

fn central_radius(w: &Window) -> i64 {
    (-w.lo()).min(w.hi()).max(-1)
}

fn certify(
    phi: &Substitution,
    input: &Window,
    base_level: &Window,
    digits: &[u32],
    i: usize,
    j: usize,
    k: i64,
) -> Result<Option<Detection>> {
    let m = (j - i) as u32;
    let mut c = 0i64;
    for (n, &d) in digits[i..j].iter().enumerate() {
        c += d as i64 * k.pow(n as u32);
    }
    let big_k = k.pow(m);
    let radius = central_radius(base_level);
    for seed in enumerate_seeds(phi, m)? {
        let diff = c - seed.base_offset() as i64;
        if diff % (1 - big_k) != 0 {
            continue;
        }
        let base = Qfp { seed, power: 0, shift: diff / (1 - big_k) };
        if base.materialize(phi, -radius, radius)? != base_level.slice(-radius, radius) {
            continue;
        }
        // input = T^{s_i}(φ^i(base)).
        let mut s_i = 0i64;
        for (n, &d) in digits[..i].iter().enumerate() {
            s_i += d as i64 * k.pow(n as u32);
        }
        let point = Qfp { seed: base.seed.clone(), power: i as u32, shift: s_i + base.shift * k.pow(i as u32) };
        let point = if i == 0 { base.clone() } else { point };
        if point.materialize(phi, input.lo(), input.hi())? == *input && point.verify(phi, input.len() as i64)? {
            let relation = base.relation(phi)?;
            return Ok(Some(Detection::Found { point, relation, digits: digits[i..j].to_vec(), level: i }));
        }
    }
    Ok(None)
}

/// Families of pairwise-disjoint W-factorizations found on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCount {
    /// Largest number of pairwise-disjoint factorizations.
    pub count: usize,
    /// Cut sets realising `count`.
    pub witnesses: Vec<Vec<i64>>,
    /// All factorizations found, as cut sets.
    pub total: usize,
    /// Smallest period up to half the window, when the window is periodic.
    pub period: Option<usize>,
}

/// Maximum number of factorizations enumerated before giving up.
pub const MAX_FACTORIZATIONS: usize = 4096;

/// Cut sets (positions where a block starts) of W-factorizations of `y`. With `first_cut`
/// the first block is anchored at `y.lo()` and may be a proper suffix of a word of `W`
/// (one-sided interpretation); otherwise the leading partial block is any suffix.
pub(crate) fn factorizations(y: &Window, words: &[Word], one_sided: bool) -> Result<Vec<Vec<i64>>> {
    let letters = y.letters();
    let n = letters.len();
    let maxlen = words.iter().map(Vec::len).max().unwrap_or(0);
    if maxlen == 0 {
        return Err(Error::InvalidArgument("W must contain a non-empty word".into()));
    }
    // Possible positions of the first cut strictly after the start: the prefix before it must be
    // a non-empty suffix of some word (proper suffix in the one-sided case).
    let mut starts: Vec<usize> = Vec::new();
    if one_sided {
        starts.push(0);
    }
    for s in 1..=n.min(maxlen) {
        let prefix = &letters[..s.min(n)];
        let ok = words.iter().any(|w| {
            if one_sided {
                w.len() > prefix.len() && w.ends_with(prefix)
            } else {
                w.len() >= prefix.len() && w.ends_with(prefix)
            }
        });
        if ok && s < n {
            starts.push(s);
        }
    }
    if !one_sided {
        // A cut at the very first position is indistinguishable from a full leading block.
        if words.iter().any(|w| w.len() <= n && letters.starts_with(w)) || words.iter().any(|w| w.starts_with(letters)) {
            starts.insert(0, 0);
        }
        starts.dedup();
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    for s in starts {
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(s, vec![s])];
        while let Some((pos, cuts)) = stack.pop() {
            if pos == n {
                out.push(cuts.iter().filter(|&&c| c < n).map(|&c| y.lo() + c as i64).collect());
                continue;
            }
            let rest = &letters[pos..];
            let mut partial = false;
            for w in words {
                if w.len() <= rest.len() {
                    if rest.starts_with(w) {
                        let mut next = cuts.clone();
                        next.push(pos + w.len());
                        stack.push((pos + w.len(), next));
                    }
                } else if w.starts_with(rest) {
                    partial = true;
                }
            }
            if partial {
                out.push(cuts.iter().map(|&c| y.lo() + c as i64).collect());
            }
            if out.len() > MAX_FACTORIZATIONS {
                return Err(Error::InvalidArgument(format!("more than {MAX_FACTORIZATIONS} factorizations")));
            }
        }
    }
    // The position y.lo() only counts as a cut in the one-sided setting.
    if !one_sided {
        for cuts in &mut out {
            cuts.retain(|&c| c != y.lo());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn max_disjoint_family(sets: &[Vec<i64>]) -> Vec<usize> {
    let disjoint = |a: &Vec<i64>, b: &Vec<i64>| {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => return false,
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
            }
        }
        true
    };
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn search(
        idx: usize,
        sets: &[Vec<i64>],
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
        disjoint: &dyn Fn(&Vec<i64>, &Vec<i64>) -> bool,
    ) {
        if current.len() + (sets.len() - idx) <= best.len() {
            return;
        }
        if idx == sets.len() {
            *best = current.clone();
            return;
        }
        if current.iter().all(|&c| disjoint(&sets[c], &sets[idx])) {
            current.push(idx);
            search(idx + 1, sets, current, best, disjoint);
            current.pop();
        }
        search(idx + 1, sets, current, best, disjoint);
    }
    search(0, sets, &mut current, &mut best, &disjoint);
    best
}

pub(crate) fn count_from(y: &Window, words: &[Word], one_sided: bool) -> Result<FactorizationCount> {
    let all = factorizations(y, words, one_sided)?;
    let family = max_disjoint_family(&all);
    Ok(FactorizationCount {
        count: family.len(),
        witnesses: family.iter().map(|&i| all[i].clone()).collect(),
        total: all.len(),
        period: y.period(y.len() / 2),
    })
}

/// Largest family of pairwise-disjoint W-factorizations realisable on the window.
pub fn disjoint_factorization_count(y: &Window, words: &[Word]) -> Result<FactorizationCount> {
    count_from(y, words, false)
}
