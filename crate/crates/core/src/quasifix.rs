//! Quasi-fixed points `z = T^c(φ^m(z))`: enumeration, materialization and verification.
//!
//! A point is described symbolically by a seed (one of the two shapes from which every
//! quasi-fixed point of period `m` is obtained by shifting), an optional number of extra
//! applications of `φ`, and a shift: the point `T^shift(φ^power(seed point))`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::kernel;
use crate::language::pair_language;
use crate::morphism::{Alphabet, Letter, Substitution, Word};
use crate::window::{image_window, Window};

/// Radius used to align windows when the substitution does not have constant length.
pub const ALIGN_RADIUS: i64 = 1000;

/// The two shapes of quasi-fixed points of `φ^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeedForm {
    /// `^ω(φ^m)(left) . (φ^m)^ω(right)`: `left` ends and `right` starts its own `φ^m` image.
    Bridge { left: Letter, right: Letter },
    /// `… φ^{2m}(before) φ^m(before) before . letter after φ^m(after) …` where
    /// `φ^m(letter) = before · letter · after` with both sides non-empty.
    Interior { letter: Letter, offset: usize, before: Word, after: Word },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QfpSeed {
    pub period: u32,
    pub form: SeedForm,
    /// Whether the point lies in the subshift; always true for interior seeds.
    pub in_system: bool,
}

impl QfpSeed {
    /// The offset `c` with `z = T^c(φ^m(z))` for the unshifted point.
    pub fn base_offset(&self) -> usize {
        match &self.form {
            SeedForm::Bridge { .. } => 0,
            SeedForm::Interior { offset, .. } => *offset,
        }
    }

    /// The letter at position 0 of the unshifted point.
    pub fn anchor(&self) -> Letter {
        match &self.form {
            SeedForm::Bridge { right, .. } => *right,
            SeedForm::Interior { letter, .. } => *letter,
        }
    }

    pub fn is_bridge(&self) -> bool {
        matches!(self.form, SeedForm::Bridge { .. })
    }
}

/// Builds the interior seed for the occurrence of `a` at `offset` inside `φ^m(a)`.
pub fn interior_seed(phi: &Substitution, a: Letter, offset: usize, m: u32) -> Result<QfpSeed> {
    check_period(m)?;
    let img = phi.power(m).image(a).to_vec();
    if offset == 0 || offset + 1 >= img.len() || img[offset] != a {
        return Err(Error::InvalidArgument(format!(
            "`{}` does not occur at interior position {offset} of its image under φ^{m}",
            phi.alphabet().token(a)
        )));
    }
    Ok(QfpSeed {
        period: m,
        form: SeedForm::Interior { letter: a, offset, before: img[..offset].to_vec(), after: img[offset + 1..].to_vec() },
        in_system: true,
    })
}

/// Builds the bridge seed `^ω(φ^m)(b) . (φ^m)^ω(a)`.
pub fn bridge_seed(phi: &Substitution, b: Letter, a: Letter, m: u32) -> Result<QfpSeed> {
    check_period(m)?;
    let pm = phi.power(m);
    if pm.image(a)[0] != a || *pm.image(b).last().expect("non-empty") != b {
        return Err(Error::InvalidArgument(format!(
            "`{}` must end its image and `{}` must start its image under φ^{m}",
            phi.alphabet().token(b),
            phi.alphabet().token(a)
        )));
    }
    Ok(QfpSeed {
        period: m,
        form: SeedForm::Bridge { left: b, right: a },
        in_system: pair_language(phi).contains(&(b, a)),
    })
}

fn check_period(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    Ok(())
}

/// All seeds of period `m`, ordered by letter, interior seeds (by offset) before bridges (by left letter).
pub fn enumerate_seeds(phi: &Substitution, m: u32) -> Result<Vec<QfpSeed>> {
    check_period(m)?;
    let pm = phi.power(m);
    let pairs = pair_language(phi);
    let left: Vec<Letter> = pm.last_letter_map().fixed_letters();
    let mut out = Vec::new();
    for a in phi.letters() {
        let img = pm.image(a);
        for i in 1..img.len().saturating_sub(1) {
            if img[i] == a {
                out.push(QfpSeed {
                    period: m,
                    form: SeedForm::Interior { letter: a, offset: i, before: img[..i].to_vec(), after: img[i + 1..].to_vec() },
                    in_system: true,
                });
            }
        }
        if img[0] == a {
            for &b in &left {
                out.push(QfpSeed { period: m, form: SeedForm::Bridge { left: b, right: a }, in_system: pairs.contains(&(b, a)) });
            }
        }
    }
    Ok(out)
}

/// `z = T^offset(φ^period(z))`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub period: u32,
    pub offset: i64,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{}(φ^{}(z))=z", self.offset, self.period)
    }
}

/// The point `T^shift(φ^power(p))` where `p` is the point of `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qfp {
    pub seed: QfpSeed,
    pub power: u32,
    pub shift: i64,
}

fn overflow(what: &'static str) -> Error {
    Error::Overflow(what)
}

fn pow_i64(k: usize, e: u32) -> Result<i64> {
    (k as i64).checked_pow(e).ok_or(overflow("k^m"))
}

/// Extends a prefix of `ρ = head · ψ(ρ)` until it has `need` letters.
fn grow_right(psi: &Substitution, head: &[Letter], start: &[Letter], need: usize) -> Result<Word> {
    let mut cur: Word = start.iter().copied().take(need).collect();
    while cur.len() < need {
        let mut next = head.to_vec();
        for &a in &cur {
            if next.len() >= need {
                break;
            }
            next.extend_from_slice(psi.image(a));
        }
        next.truncate(need);
        if next.len() <= cur.len() {
            return Err(Error::NotGrowing("materialization stalled".into()));
        }
        cur = next;
    }
    Ok(cur)
}

/// Extends a suffix of `λ = ψ(λ) · tail` until it has `need` letters.
fn grow_left(psi: &Substitution, tail: &[Letter], start: &[Letter], need: usize) -> Result<Word> {
    let mut cur: Word = start[start.len().saturating_sub(need)..].to_vec();
    while cur.len() < need {
        let mut rev: Word = tail.iter().rev().copied().collect();
        for &a in cur.iter().rev() {
            if rev.len() >= need {
                break;
            }
            rev.extend(psi.image(a).iter().rev());
        }
        rev.truncate(need);
        if rev.len() <= cur.len() {
            return Err(Error::NotGrowing("materialization stalled".into()));
        }
        rev.reverse();
        cur = rev;
    }
    Ok(cur)
}

impl QfpSeed {
    /// Letters of the unshifted seed point on `[lo, hi]`.
    pub fn window(&self, phi: &Substitution, lo: i64, hi: i64) -> Result<Window> {
        if hi < lo {
            return Ok(Window::new(lo, Vec::new()));
        }
        let pm = phi.power(self.period);
        let need_right = (hi + 1).max(0) as usize;
        let need_left = (-lo).max(0) as usize;
        let (left, right) = match &self.form {
            SeedForm::Bridge { left, right } => (
                grow_left(&pm, &[], &[*left], need_left)?,
                grow_right(&pm, &[], &[*right], need_right)?,
            ),
            SeedForm::Interior { letter, before, after, .. } => {
                let mut r = Vec::with_capacity(need_right);
                if need_right > 0 {
                    r.push(*letter);
                    r.extend(grow_right(&pm, after, after, need_right - 1)?);
                }
                (grow_left(&pm, before, before, need_left)?, r)
            }
        };
        let start = -(left.len() as i64);
        let mut letters = left;
        letters.extend(right);
        Ok(Window::new(start, letters).slice(lo, hi))
    }
}

impl Qfp {
    pub fn new(seed: QfpSeed) -> Self {
        Qfp { seed, power: 0, shift: 0 }
    }

    /// `T^t` applied to this point.
    pub fn shifted(&self, t: i64) -> Qfp {
        Qfp { seed: self.seed.clone(), power: self.power, shift: self.shift + t }
    }

    /// Letters on `[lo, hi]`.
    pub fn materialize(&self, phi: &Substitution, lo: i64, hi: i64) -> Result<Window> {
        let lo2 = lo.checked_add(self.shift).ok_or(overflow("window bounds"))?;
        let hi2 = hi.checked_add(self.shift).ok_or(overflow("window bounds"))?;
        let w = if self.power == 0 {
            self.seed.window(phi, lo2, hi2)?
        } else {
            let pp = phi.power(self.power);
            match phi.constant_length() {
                Some(k) => {
                    let kk = pow_i64(k, self.power)?;
                    let sw = self.seed.window(phi, lo2.div_euclid(kk), hi2.div_euclid(kk))?;
                    image_window(&pp, &sw).slice(lo2, hi2)
                }
                None => {
                    let mut radius = lo2.abs().max(hi2.abs()).max(1);
                    loop {
                        let img = image_window(&pp, &self.seed.window(phi, -radius, radius)?);
                        if img.covers(lo2, hi2) {
                            break img.slice(lo2, hi2);
                        }
                        radius *= 2;
                    }
                }
            }
        };
        Ok(Window::new(lo, w.into_letters()))
    }

    /// The relation `z = T^c(φ^m(z))` satisfied by this point, `m` being the seed period.
    pub fn relation(&self, phi: &Substitution) -> Result<Relation> {
        let m = self.seed.period;
        let c0 = self.seed.base_offset() as i64;
        match phi.constant_length() {
            Some(k) => {
                let base = c0.checked_mul(pow_i64(k, self.power)?).ok_or(overflow("relation offset"))?;
                let drift = 1 - pow_i64(k, m)?;
                let c = self
                    .shift
                    .checked_mul(drift)
                    .and_then(|x| x.checked_add(base))
                    .ok_or(overflow("relation offset"))?;
                Ok(Relation { period: m, offset: c })
            }
            None => {
                let base = match &self.seed.form {
                    SeedForm::Bridge { .. } => 0,
                    SeedForm::Interior { before, .. } => phi.power(self.power).apply(before).len() as i64,
                };
                let t = self.shift;
                if t == 0 {
                    return Ok(Relation { period: m, offset: base });
                }
                // T^t w = T^{c + t - |φ^m(w_[0,t))|} φ^m(T^t w) for the unshifted point w.
                let unshifted = Qfp { seed: self.seed.clone(), power: self.power, shift: 0 };
                let span = unshifted.materialize(phi, t.min(0), t.max(0) - 1)?;
                let len = phi.power(m).apply(span.letters()).len() as i64;
                let c = if t > 0 { base + t - len } else { base + t + len };
                Ok(Relation { period: m, offset: c })
            }
        }
    }

    /// Finds the offset by aligning `z` against `φ^m(z)` on windows; fails unless exactly one
    /// alignment fits. An independent check of [`Qfp::relation`].
    pub fn aligned_relation(&self, phi: &Substitution, radius: i64) -> Result<Relation> {
        let m = self.seed.period;
        let x = self.materialize(phi, -radius, radius)?;
        let y = image_window(&phi.power(m), &x);
        let half = radius / 2;
        let inner = x.slice(-half, half);
        let candidates: Vec<i64> = ((y.lo() + half)..=(y.hi() - half))
            .filter(|&c| (-half..=half).all(|n| y.get(n + c) == inner.get(n)))
            .take(2)
            .collect();
        match candidates.as_slice() {
            [c] => Ok(Relation { period: m, offset: *c }),
            [] => Err(Error::Undetermined(format!("no alignment within radius {radius}"))),
            _ => Err(Error::Undetermined(format!("several alignments within radius {radius}"))),
        }
    }

    /// Checks `T^c(φ^m(z)) = z` letterwise on `[-n, n]`.
    pub fn verify(&self, phi: &Substitution, n: i64) -> Result<bool> {
        let rel = self.relation(phi)?;
        let x = self.materialize(phi, -n, n)?;
        let image = relation_image(phi, self, rel, -n, n)?;
        Ok(x == image)
    }

    /// `φ` applied to this point; the period is unchanged.
    pub fn substitute(&self, phi: &Substitution) -> Result<Qfp> {
        let shift = match phi.constant_length() {
            Some(k) => self.shift.checked_mul(k as i64).ok_or(overflow("shift"))?,
            None => {
                let unshifted = Qfp { seed: self.seed.clone(), power: self.power, shift: 0 };
                let t = self.shift;
                let w = unshifted.materialize(phi, t.min(0), t.max(0) - 1)?;
                let len = phi.apply(w.letters()).len() as i64;
                if t >= 0 {
                    len
                } else {
                    -len
                }
            }
        };
        Ok(Qfp { seed: self.seed.clone(), power: self.power + 1, shift })
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let mut s = match &self.seed.form {
            SeedForm::Interior { letter, offset, .. } => format!(
                "qfp m={} form=interior a={} i={} shift={}",
                self.seed.period,
                alphabet.token(*letter),
                offset,
                self.shift
            ),
            SeedForm::Bridge { left, right } => format!(
                "qfp m={} form=bridge b={} a={} shift={}",
                self.seed.period,
                alphabet.token(*left),
                alphabet.token(*right),
                self.shift
            ),
        };
        if self.power > 0 {
            s.push_str(&format!(" power={}", self.power));
        }
        s
    }

    /// Parses `qfp m=<m> form=interior a=<tok> i=<i> shift=<t>` and the bridge variant.
    /// The leading `qfp`, `form=` and `shift=` are optional; `interior`/`bridge` may appear bare.
    pub fn parse(phi: &Substitution, text: &str) -> Result<Qfp> {
        let bad = |msg: String| Error::InvalidArgument(format!("seed `{text}`: {msg}"));
        let mut form = None;
        let (mut m, mut a, mut b, mut i, mut shift, mut power) = (None, None, None, None, 0i64, 0u32);
        for tok in text.split_whitespace() {
            match tok.split_once('=') {
                None if tok == "qfp" => {}
                None if tok == "interior" || tok == "bridge" => form = Some(tok.to_owned()),
                None => return Err(bad(format!("unexpected `{tok}`"))),
                Some((key, val)) => {
                    let num = |v: &str| v.parse::<i64>().map_err(|_| bad(format!("`{key}` needs an integer")));
                    let letter = |v: &str| {
                        phi.alphabet().letter(v).ok_or_else(|| Error::UndeclaredLetter { line: 0, token: v.to_owned() })
                    };
                    match key {
                        "form" => form = Some(val.to_owned()),
                        "m" => m = Some(u32::try_from(num(val)?).map_err(|_| bad("bad period".into()))?),
                        "a" => a = Some(letter(val)?),
                        "b" => b = Some(letter(val)?),
                        "i" => i = Some(usize::try_from(num(val)?).map_err(|_| bad("bad offset".into()))?),
                        "shift" => shift = num(val)?,
                        "power" => power = u32::try_from(num(val)?).map_err(|_| bad("bad power".into()))?,
                        _ => return Err(bad(format!("unknown key `{key}`"))),
                    }
                }
            }
        }
        let m = m.ok_or_else(|| bad("missing m=".into()))?;
        let a = a.ok_or_else(|| bad("missing a=".into()))?;
        let seed = match form.as_deref() {
            Some("interior") => interior_seed(phi, a, i.ok_or_else(|| bad("missing i=".into()))?, m)?,
            Some("bridge") => bridge_seed(phi, b.ok_or_else(|| bad("missing b=".into()))?, a, m)?,
            _ => return Err(bad("form must be interior or bridge".into())),
        };
        Ok(Qfp { seed, power, shift })
    }
}

/// `T^c(φ^m(z))` on `[lo, hi]` for the relation of `q`.
pub fn relation_image(phi: &Substitution, q: &Qfp, rel: Relation, lo: i64, hi: i64) -> Result<Window> {
    let pm = phi.power(rel.period);
    let (a, b) = (lo + rel.offset, hi + rel.offset);
    let img = match phi.constant_length() {
        Some(k) => {
            let kk = pow_i64(k, rel.period)?;
            image_window(&pm, &q.materialize(phi, a.div_euclid(kk), b.div_euclid(kk))?)
        }
        None => {
            let mut radius = a.abs().max(b.abs()).max(1);
            loop {
                let img = image_window(&pm, &q.materialize(phi, -radius, radius)?);
                if img.covers(a, b) {
                    break img;
                }
                radius *= 2;
            }
        }
    };
    Ok(Window::new(lo, img.slice(a, b).into_letters()))
}

/// Window-level check of a relation: `T^c(φ^m(w))` agrees with `w` wherever both are known.
pub fn satisfies_relation(phi: &Substitution, rel: Relation, w: &Window) -> bool {
    if phi.constant_length().is_none() && !(w.lo() <= 0 && w.hi() >= -1) {
        return false;
    }
    let img = image_window(&phi.power(rel.period), w).shifted(rel.offset);
    img.overlap(w).is_some() && img.agrees_with(w)
}

/// Outcome of comparing two points.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Equality {
    pub equal: bool,
    /// False when the comparison was made on finite windows only.
    pub exact: bool,
}

/// Exact equality through kernel automata for constant length; a window comparison otherwise.
pub fn is_equal(phi: &Substitution, q1: &Qfp, q2: &Qfp) -> Result<Equality> {
    if phi.constant_length().is_some() {
        let a1 = kernel::build_kernel_automaton(phi, q1, None)?;
        let a2 = kernel::build_kernel_automaton(phi, q2, None)?;
        return Ok(Equality { equal: kernel::equal_sequences(&a1, &a2), exact: true });
    }
    let r = ALIGN_RADIUS;
    Ok(Equality { equal: q1.materialize(phi, -r, r)? == q2.materialize(phi, -r, r)?, exact: false })
}

/// Default search bound for shift periods: `k^m · |A|²`.
pub fn default_period_bound(phi: &Substitution, m: u32) -> u64 {
    let k = phi.constant_length().unwrap_or_else(|| phi.max_image_len()) as u64;
    k.saturating_pow(m).saturating_mul((phi.size() * phi.size()) as u64)
}

/// Least `p ∈ [1, p_max]` with `T^p(z) = z`, if any. Candidates are screened on a window first
/// and confirmed exactly for constant-length substitutions.
pub fn shift_period(phi: &Substitution, q: &Qfp, p_max: u64) -> Result<Option<u64>> {
    let radius = (4 * p_max as i64).max(256);
    let w = q.materialize(phi, -radius, radius)?;
    let letters = w.letters();
    for p in 1..=p_max as usize {
        if p >= letters.len() {
            break;
        }
        if (p..letters.len()).all(|i| letters[i] == letters[i - p]) && is_equal(phi, q, &q.shifted(p as i64))?.equal {
            return Ok(Some(p as u64));
        }
    }
    Ok(None)
}

/// Least period `m*` of a relation satisfied by the point; every period is a multiple of it.
pub fn minimal_period(phi: &Substitution, q: &Qfp) -> Result<u32> {
    let k = phi.require_constant_length()?;
    let rel = q.relation(phi)?;
    let m = rel.period;
    let kb = BigInt::from(k);
    let kappa = BigRational::new(BigInt::from(rel.offset), BigInt::one() - kb.pow(m));
    for d in (1..m).filter(|d| m % d == 0) {
        let c = &kappa * BigRational::from_integer(BigInt::one() - kb.pow(d));
        if !c.is_integer() {
            continue;
        }
        let c = c.to_integer().to_i64().ok_or(overflow("offset"))?;
        let shift = q.shift.checked_mul(pow_i64(k, d)?).and_then(|s| s.checked_add(c)).ok_or(overflow("shift"))?;
        let candidate = Qfp { seed: q.seed.clone(), power: q.power + d, shift };
        if is_equal(phi, &candidate, q)?.equal {
            return Ok(d);
        }
    }
    Ok(m)
}

/// Re-expresses a point as a shifted seed of the same period, if one matches exactly.
pub fn as_shifted_seed(phi: &Substitution, q: &Qfp) -> Result<Option<Qfp>> {
    let k = phi.require_constant_length()?;
    let rel = q.relation(phi)?;
    let drift = 1 - pow_i64(k, rel.period)?;
    for seed in enumerate_seeds(phi, rel.period)? {
        let diff = rel.offset - seed.base_offset() as i64;
        if diff % drift != 0 {
            continue;
        }
        let candidate = Qfp { seed, power: 0, shift: diff / drift };
        if is_equal(phi, &candidate, q)?.equal {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// Keeps the first point of every equality class, preserving order.
pub fn dedup(phi: &Substitution, points: &[Qfp]) -> Result<Vec<Qfp>> {
    let mut reps: Vec<Qfp> = Vec::new();
    let mut autos = Vec::new();
    for q in points {
        if phi.constant_length().is_some() {
            let a = kernel::build_kernel_automaton(phi, q, None)?;
            if autos.iter().any(|b| kernel::equal_sequences(b, &a)) {
                continue;
            }
            autos.push(a);
        } else if reps.iter().map(|r| is_equal(phi, r, q)).collect::<Result<Vec<_>>>()?.iter().any(|e| e.equal) {
            continue;
        }
        reps.push(q.clone());
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm() -> Substitution {
        Substitution::from_rules(&[("0", "01"), ("1", "10")]).unwrap()
    }

    fn tm_z() -> Qfp {
        Qfp::new(interior_seed(&tm(), Letter(0), 5, 4).unwrap())
    }

    fn render(phi: &Substitution, w: &Window) -> String {
        phi.alphabet().render(w.letters())
    }

    #[test]
    fn thue_morse_seeds_of_period_four() {
        let seeds = enumerate_seeds(&tm(), 4).unwrap();
        let zeros: Vec<usize> = seeds
            .iter()
            .filter_map(|s| match s.form {
                SeedForm::Interior { letter: Letter(0), offset, .. } => Some(offset),
                _ => None,
            })
            .collect();
        assert_eq!(zeros, vec![3, 5, 6, 9, 10, 12]);
        assert_eq!(seeds.iter().filter(|s| !s.is_bridge()).count(), 12);
        let bridges: Vec<&QfpSeed> = seeds.iter().filter(|s| s.is_bridge()).collect();
        assert_eq!(bridges.len(), 4);
        assert!(bridges.iter().all(|s| s.in_system));
    }

    #[test]
    fn thue_morse_period_one_is_empty() {
        assert!(enumerate_seeds(&tm(), 1).unwrap().is_empty());
    }

    #[test]
    fn doubling_has_one_bridge() {
        let phi = Substitution::from_rules(&[("a", "aa")]).unwrap();
        let seeds = enumerate_seeds(&phi, 1).unwrap();
        assert_eq!(seeds.len(), 1);
        assert!(seeds[0].is_bridge());
        let w = Qfp::new(seeds[0].clone()).materialize(&phi, -7, 7).unwrap();
        assert!(w.letters().iter().all(|&a| a == Letter(0)));
    }

    #[test]
    fn thue_morse_interior_windows() {
        let z = tm_z();
        assert_eq!(render(&tm(), &z.materialize(&tm(), 0, 10).unwrap()), "00110010110");
        assert_eq!(render(&tm(), &z.materialize(&tm(), -5, -1).unwrap()), "01101");
        // Far windows agree with slices of a wide one.
        let wide = z.materialize(&tm(), -300, 300).unwrap();
        assert_eq!(z.materialize(&tm(), 100, 120).unwrap(), wide.slice(100, 120));
        assert_eq!(z.materialize(&tm(), -250, -200).unwrap(), wide.slice(-250, -200));
    }

    #[test]
    fn thue_morse_relation_and_shifts() {
        let z = tm_z();
        assert_eq!(z.relation(&tm()).unwrap(), Relation { period: 4, offset: 5 });
        assert_eq!(z.shifted(1).relation(&tm()).unwrap().offset, -10);
        assert!(z.verify(&tm(), 2000).unwrap());
        assert!(z.shifted(1).verify(&tm(), 500).unwrap());
        assert!(z.shifted(-7).verify(&tm(), 500).unwrap());
    }

    #[test]
    fn corrupted_window_fails() {
        let z = tm_z();
        let rel = z.relation(&tm()).unwrap();
        let mut letters = z.materialize(&tm(), -64, 64).unwrap().into_letters();
        assert!(satisfies_relation(&tm(), rel, &Window::new(-64, letters.clone())));
        letters[70] = Letter(1 - letters[70].0);
        assert!(!satisfies_relation(&tm(), rel, &Window::new(-64, letters)));
    }

    #[test]
    fn substitution_keeps_period() {
        let z = tm_z();
        let fz = z.substitute(&tm()).unwrap();
        assert_eq!(fz.relation(&tm()).unwrap(), Relation { period: 4, offset: 10 });
        assert!(fz.verify(&tm(), 500).unwrap());
        let x = z.materialize(&tm(), -40, 40).unwrap();
        let y = image_window(&tm(), &x);
        assert!(y.agrees_with(&fz.materialize(&tm(), -80, 80).unwrap()));
    }

    #[test]
    fn minimal_period_of_thue_morse_point() {
        assert_eq!(minimal_period(&tm(), &tm_z()).unwrap(), 4);
        let phi = Substitution::from_rules(&[("a", "ab"), ("b", "ba"), ("c", "cc")]).unwrap();
        let seed = bridge_seed(&phi, Letter(2), Letter(0), 2).unwrap();
        assert_eq!(minimal_period(&phi, &Qfp::new(seed)).unwrap(), 1);
    }

    #[test]
    fn equality_of_points() {
        let z = tm_z();
        assert!(is_equal(&tm(), &z, &z.shifted(0)).unwrap().equal);
        let tm2 = tm();
        let b01 = Qfp::new(bridge_seed(&tm2, Letter(0), Letter(1), 2).unwrap());
        let b10 = Qfp::new(bridge_seed(&tm2, Letter(1), Letter(0), 2).unwrap());
        assert!(!is_equal(&tm2, &b01, &b10).unwrap().equal);
        let b00_2 = Qfp::new(bridge_seed(&tm2, Letter(0), Letter(0), 2).unwrap());
        let b00_4 = Qfp::new(bridge_seed(&tm2, Letter(0), Letter(0), 4).unwrap());
        assert!(is_equal(&tm2, &b00_2, &b00_4).unwrap().equal);
        let all: Vec<Qfp> = enumerate_seeds(&tm2, 2).unwrap().into_iter().chain(enumerate_seeds(&tm2, 4).unwrap()).map(Qfp::new).collect();
        let reps = dedup(&tm2, &all).unwrap();
        assert_eq!(reps.len(), 4 + 12);
    }

    #[test]
    fn seed_text_round_trip() {
        let z = tm_z().shifted(3);
        let s = z.to_text(tm().alphabet());
        assert_eq!(s, "qfp m=4 form=interior a=0 i=5 shift=3");
        assert_eq!(Qfp::parse(&tm(), &s).unwrap(), z);
        assert_eq!(Qfp::parse(&tm(), "interior a=0 i=5 m=4").unwrap(), tm_z());
        assert!(Qfp::parse(&tm(), "interior a=0 i=4 m=4").is_err());
    }

    #[test]
    fn periodic_points_are_detected() {
        let phi = Substitution::from_rules(&[("a", "ab"), ("b", "ab")]).unwrap();
        let q = Qfp::new(bridge_seed(&phi, Letter(1), Letter(0), 1).unwrap());
        assert_eq!(shift_period(&phi, &q, 8).unwrap(), Some(2));
        assert_eq!(shift_period(&tm(), &tm_z(), 64).unwrap(), None);
    }

    #[test]
    fn shifted_seed_recovered() {
        let z = tm_z().shifted(2).substitute(&tm()).unwrap();
        let s = as_shifted_seed(&tm(), &z).unwrap().expect("every quasi-fixed point is a shifted seed");
        assert_eq!(s.power, 0);
        assert!(is_equal(&tm(), &s, &z).unwrap().equal);
    }

    /// Non-constant length: the offset of a shifted point satisfies the relation letterwise and
    /// agrees with window alignment whenever that alignment is unique.
    #[test]
    fn nonconstant_shifted_offsets() {
        let phi = Substitution::from_rules(&[("a", "aab"), ("b", "ba")]).unwrap();
        let seeds = enumerate_seeds(&phi, 2).unwrap();
        assert!(!seeds.is_empty());
        for seed in seeds {
            let q = Qfp::new(seed);
            let c0 = q.relation(&phi).unwrap().offset;
            assert!(q.verify(&phi, 300).unwrap());
            for t in [1i64, 3, -2] {
                let got = q.shifted(t).relation(&phi).unwrap();
                assert_ne!(got.offset, c0);
                assert!(q.shifted(t).verify(&phi, 300).unwrap());
                if let Ok(aligned) = q.shifted(t).aligned_relation(&phi, ALIGN_RADIUS) {
                    assert_eq!(aligned, got);
                }
            }
        }
    }
}
