//! The worked examples: substitutions, codings and points, plus a runner that checks each
//! quoted fact and reports one line per check.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::analysis::prolongability;
use crate::blocks::{fiber_windows, minimal_subsystems, BlockSubstitution, SlidingBlockCode};
use crate::desub::{desub_digits, desubstitute_window};
use crate::error::{Error, Result};
use crate::kadic::{kappa, KAdicRational};
use crate::kernel::{build_kernel_automaton, equal_sequences};
use crate::language::{self, pair_language, LanguageTable};
use crate::morphism::{Alphabet, Coding, Letter, Substitution, Word};
use crate::onesided::{onesided_desub, prolong_two_sided, OneSidedQfp};
use crate::quasifix::{bridge_seed, interior_seed, Qfp};
use crate::window::Window;

pub const EXAMPLE_NAMES: [&str; 6] = ["thue-morse", "remark", "fiber", "two-sided", "appendix", "club"];

/// Radius used for letterwise comparisons of two-sided points.
pub const CHECK_RADIUS: i64 = 1000;

pub fn thue_morse() -> Substitution {
    Substitution::from_rules(&[("0", "01"), ("1", "10")]).expect("valid")
}

/// The point `z` with `T^5(φ^4(z)) = z`.
pub fn thue_morse_z() -> Qfp {
    Qfp::new(interior_seed(&thue_morse(), Letter(0), 5, 4).expect("valid seed"))
}

/// A substitution whose language misses the letter `0`.
pub fn remark() -> Substitution {
    Substitution::from_rules(&[("0", "12"), ("1", "22"), ("2", "11")]).expect("valid")
}

/// A coding that collapses a Thue–Morse subsystem onto a constant sequence.
pub fn fiber() -> (Substitution, Coding) {
    let phi = Substitution::from_rules(&[("0", "0123"), ("1", "1031"), ("2", "2332"), ("3", "3223")]).expect("valid");
    let tau = Coding::from_pairs(phi.alphabet(), &[("0", "0"), ("1", "1"), ("2", "2"), ("3", "2")]).expect("valid");
    (phi, tau)
}

/// Two Thue–Morse copies, one sent onto the other by desubstitution.
pub fn two_sided() -> (Substitution, Coding) {
    let phi = Substitution::from_rules(&[("0", "0130"), ("1", "3443"), ("2", "4334"), ("3", "1221"), ("4", "2112")])
        .expect("valid");
    let tau =
        Coding::from_pairs(phi.alphabet(), &[("0", "0"), ("1", "1"), ("2", "2"), ("3", "3"), ("4", "3")]).expect("valid");
    (phi, tau)
}

/// The one-sided example: `τ(x) = 10^ω` while `τ(Tx) = 0^ω`.
pub fn appendix() -> (Substitution, Coding) {
    let phi = Substitution::from_rules(&[("0", "1023"), ("1", "1201"), ("2", "2332"), ("3", "3223")]).expect("valid");
    let tau = Coding::from_pairs(phi.alphabet(), &[("0", "0"), ("1", "1"), ("2", "0"), ("3", "0")]).expect("valid");
    (phi, tau)
}

/// The prefix `1 0 v φ(v) φ²(v) …` with `v = 23`, built from its definition.
pub fn appendix_prefix(phi: &Substitution, len: usize) -> Word {
    let mut x = vec![Letter(1), Letter(0)];
    let mut v = vec![Letter(2), Letter(3)];
    while x.len() < len {
        x.extend_from_slice(&v);
        v = phi.apply(&v);
    }
    x.truncate(len);
    x
}

/// Instantiation of the example built from `♣`, a length-5 substitution `φ` with a nonperiodic
/// two-sided fixed point `x`, and a length-5 substitution `φ'` (the 2-block presentation of
/// `φ`) with a fixed point coding to `Tx`.
#[derive(Clone, Debug)]
pub struct ClubExample {
    pub base: Substitution,
    pub theta: Substitution,
    pub tau: Coding,
    /// `x` as a point of `φ`.
    pub x: Qfp,
    /// `Tx` as a point of `ϑ`.
    pub x_prime: Qfp,
    /// The block lift of `x` as a point of `ϑ`; it codes to `Tx`.
    pub x_double: Qfp,
}

pub fn club() -> Result<ClubExample> {
    let base = Substitution::from_rules(&[("0", "01100"), ("1", "10011")])?;
    let blocks = BlockSubstitution::new(&base, 2)?;
    let hat = blocks.substitution();
    let n_base = base.size() as u32;
    // Letters: ♣, then A, then the blocks.
    let mut tokens = vec!["♣".to_owned()];
    tokens.extend(base.alphabet().tokens().iter().cloned());
    tokens.extend(hat.alphabet().tokens().iter().map(|t| format!("[{t}]")));
    let alphabet = Alphabet::new(tokens)?;
    let club = Letter(0);
    let from_base = |a: Letter| Letter(1 + a.0);
    let from_hat = |b: Letter| Letter(1 + n_base + b.0);
    let a = from_base(Letter(0));
    let a_hat = from_hat(blocks.letter_of(&[Letter(0), Letter(1)]).expect("01 is a block"));
    let mut images: Vec<Word> = vec![vec![club, club, a, a_hat, club]];
    images.extend(base.images().iter().map(|w| w.iter().map(|&c| from_base(c)).collect()));
    images.extend(hat.images().iter().map(|w| w.iter().map(|&c| from_hat(c)).collect()));
    let theta = Substitution::new(alphabet.clone(), images)?;

    let target = Alphabet::new(["♣", "0", "1"])?;
    let mut map = vec![Letter(0)];
    map.extend(base.letters().map(|c| Letter(1 + c.0)));
    map.extend(hat.letters().map(|b| Letter(1 + blocks.block(b)[1].0)));
    let tau = Coding::new(alphabet, target, map)?;

    let x = Qfp::new(bridge_seed(&base, Letter(0), Letter(0), 1)?);
    let x_prime = Qfp::new(bridge_seed(&theta, from_base(Letter(0)), from_base(Letter(0)), 1)?).shifted(1);
    let left = blocks.letter_of(&[Letter(0), Letter(0)]).expect("00 is a block");
    let right = blocks.letter_of(&[Letter(0), Letter(1)]).expect("01 is a block");
    let x_double = Qfp::new(bridge_seed(&theta, from_hat(left), from_hat(right), 1)?);
    Ok(ClubExample { base, theta, tau, x, x_prime, x_double })
}

/// One asserted fact of an example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn check(&mut self, anchor: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { anchor: anchor.to_owned(), passed, detail: detail.into() });
    }

    fn equal<T: PartialEq + std::fmt::Debug>(&mut self, anchor: &str, got: T, want: T) {
        let passed = got == want;
        let detail = if passed { format!("{got:?}") } else { format!("got {got:?}, expected {want:?}") };
        self.check(anchor, passed, detail);
    }
}

/// Runs every example, or only the named one.
pub fn run_paper_examples(only: Option<&str>) -> Result<Vec<ExampleReport>> {
    if let Some(name) = only {
        if !EXAMPLE_NAMES.contains(&name) {
            return Err(Error::InvalidArgument(format!(
                "unknown example `{name}`; expected one of {}",
                EXAMPLE_NAMES.join(", ")
            )));
        }
    }
    EXAMPLE_NAMES
        .iter()
        .filter(|n| only.is_none_or(|o| o == **n))
        .map(|&name| {
            let checks = match name {
                "thue-morse" => thue_morse_checks()?,
                "remark" => remark_checks()?,
                "fiber" => fiber_checks()?,
                "two-sided" => two_sided_checks()?,
                "appendix" => appendix_checks()?,
                "club" => club_checks()?,
                _ => unreachable!("names are checked above"),
            };
            Ok(ExampleReport { name, checks })
        })
        .collect()
}

fn thue_morse_checks() -> Result<Vec<Check>> {
    let phi = thue_morse();
    let mut c = Checks(Vec::new());
    let p4 = phi.power(4);
    c.equal("φ^4(0)", phi.alphabet().render(p4.image(Letter(0))), "0110100110010110".to_owned());
    c.equal("φ^4(1)", phi.alphabet().render(p4.image(Letter(1))), "1001011001101001".to_owned());
    let z = thue_morse_z();
    let rel = z.relation(&phi)?;
    c.equal("relation (m, c)", (rel.period, rel.offset), (4, 5));
    c.check("T^5(φ^4(z)) = z on [-10^4, 10^4]", z.verify(&phi, 10_000)?, "letterwise");
    let k = kappa(&phi, &z)?;
    c.equal("κ(z)", k.fraction(), "-1/3".to_owned());
    c.equal("κ(z) digits", k.expansion().to_string(), "pre= cyc=10".to_owned());
    c.equal("desub digits of z", desub_digits(&phi, &z)?.expansion.to_string(), k.expansion().to_string());
    c.equal("κ(Tz)", kappa(&phi, &z.shifted(1))?.fraction(), KAdicRational::new(2, 3, 2)?.fraction());
    let profile = prolongability(&phi);
    c.equal("n_amb", profile.n_amb, 2);
    c.check("n_amb ≤ |A|!", BigUint::from(profile.n_amb) <= profile.n_amb_bound, format!("bound {}", profile.n_amb_bound));
    Ok(c.0)
}

fn remark_checks() -> Result<Vec<Check>> {
    let phi = remark();
    let mut c = Checks(Vec::new());
    let render = |set: &BTreeSet<Letter>| set.iter().map(|&a| phi.alphabet().token(a)).collect::<Vec<_>>().join(",");
    c.equal("L^1 = {1,2}", render(&language::letters(&phi)), "1,2".to_owned());
    let pairs: Vec<String> = pair_language(&phi).iter().map(|&(a, b)| phi.alphabet().render(&[a, b])).collect();
    c.equal("pair language", pairs.join(","), "11,12,21,22".to_owned());
    let subs: Vec<String> = minimal_subsystems(&phi)?.iter().map(|s| render(&s.letters)).collect();
    c.equal("minimal subsystems of φ^2", subs.join(" "), "1 2".to_owned());
    Ok(c.0)
}

fn fiber_checks() -> Result<Vec<Check>> {
    let (phi, tau) = fiber();
    let mut c = Checks(Vec::new());
    let code = SlidingBlockCode::from_coding(&phi, &tau)?;
    let two = tau.target().letter("2").expect("token 2");
    let mut counts = Vec::new();
    for len in [4usize, 8, 16] {
        counts.push(fiber_windows(&phi, &code, &Window::new(0, vec![two; len]), 1 << 20)?.windows.len());
    }
    c.check("preimage counts of 2^L grow (L = 4, 8, 16)", counts.windows(2).all(|w| w[0] < w[1]), format!("{counts:?}"));
    c.check("preimage count of 2^16 exceeds 8", counts[2] > 8, format!("{}", counts[2]));
    let over_23 = language::language(&phi, 16)
        .into_iter()
        .filter(|w| w.len() == 16 && w.iter().all(|&a| a == Letter(2) || a == Letter(3)))
        .count();
    c.equal("preimages of 2^16 are the {2,3} words of the language", counts[2], over_23);

    let t = thue_morse();
    let id = SlidingBlockCode::from_coding(&t, &Coding::identity(t.alphabet()))?;
    let z = thue_morse_z();
    let mut ones = Vec::new();
    for len in [8i64, 16, 32] {
        let target = z.materialize(&t, 0, len - 1)?;
        ones.push(fiber_windows(&t, &id, &target, 16)?.windows.len());
    }
    c.equal("identity coding on a Thue–Morse target (L = 8, 16, 32)", ones, vec![1, 1, 1]);
    Ok(c.0)
}

fn two_sided_checks() -> Result<Vec<Check>> {
    let (phi, tau) = two_sided();
    let mut c = Checks(Vec::new());
    let x1 = Qfp::new(bridge_seed(&phi, Letter(1), Letter(2), 2)?);
    let x2 = Qfp::new(bridge_seed(&phi, Letter(3), Letter(4), 2)?);
    c.check("x', x'' lie in the subshift", x1.seed.in_system && x2.seed.in_system, "pairs 12 and 34");
    let r = CHECK_RADIUS;
    let w1 = x1.materialize(&phi, -r, r)?;
    let w2 = x2.materialize(&phi, -r, r)?;
    let image = x2.substitute(&phi)?.materialize(&phi, -r, r)?;
    c.check("x' = φ(x'')", image == w1, format!("radius {r}"));
    let lang = LanguageTable::new(&phi);
    let steps = desubstitute_window(&phi, &lang, &w1);
    let unique = steps.len() == 1 && steps[0].c == 0 && steps[0].pred.agrees_with(&w2);
    c.check("R_φ(x') = x'' (unique desubstitution step)", unique, format!("{} step(s)", steps.len()));
    let y1 = w1.map_letters(|a| tau.apply_letter(a));
    let y2 = w2.map_letters(|a| tau.apply_letter(a));
    c.check("τ(x') = x'", y1.letters() == w1.letters(), format!("radius {r}"));
    c.check("τ(x') nonperiodic", y1.period(y1.len() / 2).is_none(), "no period ≤ radius");
    c.check("τ(x'') constant", y2.period(1) == Some(1), "all 3");
    Ok(c.0)
}

fn appendix_checks() -> Result<Vec<Check>> {
    let (phi, tau) = appendix();
    let mut c = Checks(Vec::new());
    let n = CHECK_RADIUS as usize;
    let prefix = appendix_prefix(&phi, n + 1);
    let x = prolong_two_sided(&phi, 1, 4, &prefix[..64])?;
    let xp = OneSidedQfp::new(x.parent.clone(), x.start + 1);
    let px = x.prefix(&phi, n + 1)?;
    c.check("x prolongs to a two-sided quasi-fixed point", px == prefix, format!("parent {}", x.parent.to_text(phi.alphabet()).trim()));
    c.check("x = T^4(φ(x))", x.verify(&phi, n)?, format!("relation c = {}", x.relation(&phi)?.offset));
    let pxp = xp.prefix(&phi, n + 1)?;
    c.check("x = φ(x')", phi.apply(&pxp)[..n] == px[..n], "prefix");
    c.check("x' = T(φ(x'))", phi.apply(&pxp)[1..=n] == pxp[..n], "prefix");
    let steps = onesided_desub(&phi, &px[..256]);
    let has = |s: &[crate::desub::DesubStep], c0: usize| s.iter().any(|s| s.c == c0 && s.pred.letters() == &pxp[..s.pred.len()]);
    c.check("(x, x', …) among one-sided steps of x", has(&steps, 0), format!("{} step(s)", steps.len()));
    c.check("(x', x', …) among one-sided steps of x'", has(&onesided_desub(&phi, &pxp[..256]), 1), "c = 1");
    let tx = tau.apply(&px[..n]);
    let mut want = vec![Letter(0); n];
    want[0] = Letter(1);
    c.check("τ(x) = 1 0 0 0 …", tx == want, format!("length {n}"));
    let one_sided_periodic = (1..n / 2).any(|p| (p..n).all(|i| tx[i] == tx[i - p]));
    c.check("τ(x) not periodic", !one_sided_periodic, "no period ≤ 500");
    c.check("τ(Tx) = 0 0 0 …", tau.apply(&pxp[..n]).iter().all(|&a| a == Letter(0)), format!("length {n}"));
    Ok(c.0)
}

fn club_checks() -> Result<Vec<Check>> {
    let ex = club()?;
    let mut c = Checks(Vec::new());
    let r = CHECK_RADIUS;
    let xw = ex.x.materialize(&ex.base, -r, r)?;
    c.check("x nonperiodic", xw.period(xw.len() / 2).is_none(), format!("no period ≤ {r}"));
    c.check("x = φ(x)", ex.x.verify(&ex.base, r)?, "fixed point");
    c.check("x', x'' lie in the subshift", ex.x_prime.seed.in_system && ex.x_double.seed.in_system, "bridge pairs in L");
    let d1 = desub_digits(&ex.theta, &ex.x_prime)?.expansion;
    let d2 = desub_digits(&ex.theta, &ex.x_double)?.expansion;
    c.equal("c(x')", (d1.prefix(6), d1.to_string()), (vec![1, 0, 0, 0, 0, 0], "pre=1 cyc=0".to_owned()));
    c.equal("c(x'')", (d2.prefix(6), d2.to_string()), (vec![0; 6], "pre= cyc=0".to_owned()));
    let a1 = build_kernel_automaton(&ex.theta, &ex.x_prime, Some(&ex.tau))?;
    let a2 = build_kernel_automaton(&ex.theta, &ex.x_double, Some(&ex.tau))?;
    c.check("τ(x') = τ(x'') (automata)", equal_sequences(&a1, &a2), "exact");
    let y1 = ex.x_prime.materialize(&ex.theta, -r, r)?.map_letters(|a| ex.tau.apply_letter(a));
    let y2 = ex.x_double.materialize(&ex.theta, -r, r)?.map_letters(|a| ex.tau.apply_letter(a));
    let tx = xw.slice(-r + 1, r).shifted(1).map_letters(|a| Letter(1 + a.0));
    c.check("τ(x') = τ(x'') = Tx (windows)", y1 == y2 && y1.agrees_with(&tx), format!("radius {r}"));
    Ok(c.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_passes() {
        for report in run_paper_examples(None).unwrap() {
            for check in &report.checks {
                assert!(check.passed, "{}: {} ({})", report.name, check.anchor, check.detail);
            }
        }
    }

    #[test]
    fn only_selects_one() {
        let r = run_paper_examples(Some("remark")).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].name, "remark");
        assert!(run_paper_examples(Some("nope")).is_err());
    }

    #[test]
    fn club_construction() {
        let ex = club().unwrap();
        assert_eq!(ex.theta.size(), 7);
        assert_eq!(ex.theta.constant_length(), Some(5));
        assert_eq!(ex.theta.alphabet().render(ex.theta.image(Letter(0))), "♣ ♣ 0 [01] ♣");
        // The length-5 pairs 00101/11010 and 00011/11100 have no two-sided fixed point: their last-letter maps swap 0 and 1.
        let swapping = Substitution::from_rules(&[("0", "00101"), ("1", "11010")]).unwrap();
        assert!(swapping.last_letter_map().fixed_letters().is_empty());
    }
}
