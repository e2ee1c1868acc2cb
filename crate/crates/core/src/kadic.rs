//! Rational points of the k-adic integers and their ultimately periodic digit streams.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::morphism::Substitution;
use crate::quasifix::Qfp;

/// A reduced fraction `p/q` with `gcd(q, k) = 1`, viewed as an element of `Z_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KAdicRational {
    value: BigRational,
    base: u32,
}

fn check_base(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("base must be at least 2, got {k}")));
    }
    Ok(())
}

impl KAdicRational {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, base: u32) -> Result<Self> {
        check_base(base)?;
        let q = q.into();
        if q.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::from_value(BigRational::new(p.into(), q), base)
    }

    fn from_value(value: BigRational, base: u32) -> Result<Self> {
        if !value.denom().gcd(&BigInt::from(base)).is_one() {
            return Err(Error::NotKAdic { q: value.denom().to_string(), k: base });
        }
        Ok(KAdicRational { value, base })
    }

    pub fn from_integer(n: impl Into<BigInt>, base: u32) -> Result<Self> {
        Self::new(n, 1, base)
    }

    /// The address of a point with `z = T^c(φ^m(z))` for a length-`k` substitution: `c/(1 − k^m)`.
    pub fn from_relation(c: impl Into<BigInt>, m: u32, k: u32) -> Result<Self> {
        check_base(k)?;
        if m == 0 {
            return Err(Error::InvalidArgument("relation period must be at least 1".into()));
        }
        let q = BigInt::one() - BigInt::from(k).pow(m);
        Self::new(c, q, k)
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    /// `p/q` without the base.
    pub fn fraction(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.base != other.base {
            return Err(Error::InvalidArgument(format!("bases differ: {} vs {}", self.base, other.base)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Self::from_value(&self.value + &other.value, self.base)
    }

    pub fn negate(&self) -> Self {
        KAdicRational { value: -&self.value, base: self.base }
    }

    pub fn add_int(&self, n: impl Into<BigInt>) -> Self {
        KAdicRational { value: &self.value + BigRational::from_integer(n.into()), base: self.base }
    }

    /// The shift acts as `+1` on addresses.
    pub fn add_one(&self) -> Self {
        self.add_int(1)
    }

    /// The substitution acts as multiplication by `k` on addresses.
    pub fn times_k(&self) -> Self {
        KAdicRational { value: &self.value * BigInt::from(self.base), base: self.base }
    }

    /// Digits by long division in `Z_k`, canonicalized.
    pub fn expansion(&self) -> DigitExpansion {
        let k = BigInt::from(self.base);
        let q = self.denom().clone();
        let q_inv = mod_inverse(&q.mod_floor(&k), &k).expect("denominator is a unit mod k");
        let mut seen: HashMap<BigInt, usize> = HashMap::new();
        let mut digits: Vec<u32> = Vec::new();
        let mut p = self.numer().clone();
        let start = loop {
            if let Some(&i) = seen.get(&p) {
                break i;
            }
            seen.insert(p.clone(), digits.len());
            let c = (p.mod_floor(&k) * &q_inv).mod_floor(&k);
            digits.push(c.to_u32().expect("digit below base"));
            p = (p - &c * &q) / &k;
        };
        let cycle = digits.split_off(start);
        DigitExpansion { base: self.base, preperiod: digits, cycle }.canonical()
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

impl fmt::Display for KAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (base {})", self.fraction(), self.base)
    }
}

/// An ultimately periodic digit stream `c_0 c_1 …`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitExpansion {
    base: u32,
    preperiod: Vec<u32>,
    cycle: Vec<u32>,
}

impl DigitExpansion {
    pub fn new(base: u32, preperiod: Vec<u32>, cycle: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("digit cycle must be non-empty".into()));
        }
        if let Some(d) = preperiod.iter().chain(&cycle).find(|&&d| d >= base) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for base {base}")));
        }
        Ok(DigitExpansion { base, preperiod, cycle }.canonical())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[u32] {
        &self.cycle
    }

    /// The `i`-th digit.
    pub fn digit(&self, i: usize) -> u32 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.cycle[(i - self.preperiod.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.digit(i)).collect()
    }

    /// Minimal cycle, then shortest preperiod; equal streams get equal representations.
    pub fn canonical(mut self) -> Self {
        let n = self.cycle.len();
        if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (0..n).all(|i| self.cycle[i] == self.cycle[(i + d) % n])) {
            self.cycle.truncate(d);
        }
        while let (Some(&p), Some(&c)) = (self.preperiod.last(), self.cycle.last()) {
            if p != c {
                break;
            }
            self.preperiod.pop();
            self.cycle.rotate_right(1);
        }
        self
    }

    /// The rational whose expansion this is.
    pub fn value(&self) -> KAdicRational {
        let k = BigInt::from(self.base);
        let horner = |ds: &[u32]| ds.iter().rev().fold(BigInt::zero(), |acc, &d| acc * &k + BigInt::from(d));
        let pre = BigRational::from_integer(horner(&self.preperiod));
        let scale = BigRational::from_integer(k.pow(self.preperiod.len() as u32));
        let cyc = BigRational::new(horner(&self.cycle), BigInt::one() - k.pow(self.cycle.len() as u32));
        KAdicRational::from_value(pre + scale * cyc, self.base).expect("denominator divides 1 - k^l")
    }

    fn render_digits(&self, ds: &[u32]) -> String {
        let sep = if self.base <= 10 { "" } else { "," };
        ds.iter().map(u32::to_string).collect::<Vec<_>>().join(sep)
    }
}

impl fmt::Display for DigitExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pre={} cyc={}", self.render_digits(&self.preperiod), self.render_digits(&self.cycle))
    }
}

/// Integer value of an LSD-first digit word.
pub fn digits_value(digits: &[u32], k: u32) -> BigInt {
    digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * BigInt::from(k) + BigInt::from(d))
}

/// `true` when `x` is a non-negative integer in this representation.
pub fn is_nonnegative_integer(r: &KAdicRational) -> bool {
    r.is_integer() && !r.numer().is_negative()
}

/// The k-adic address of a quasi-fixed point of a length-`k` substitution, read off its relation.
pub fn kappa(phi: &Substitution, q: &Qfp) -> Result<KAdicRational> {
    let k = phi.require_constant_length()?;
    let k = u32::try_from(k).map_err(|_| Error::Overflow("substitution length"))?;
    let rel = q.relation(phi)?;
    KAdicRational::from_relation(rel.offset, rel.period, k)
}
