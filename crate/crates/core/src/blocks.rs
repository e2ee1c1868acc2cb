//! Higher block presentations, sliding block codes and what happens to quasi-fixed points
//! under factor maps.

use std::collections::BTreeSet;

use crate::analysis::{self, is_primitive, reachable_alphabet, restrict};
use crate::desub::{detect_qfp, Detection};
use crate::error::{Error, Result};
use crate::kernel::{build_kernel_automaton, KernelAutomaton};
use crate::language::{self, LanguageTable};
use crate::morphism::{Alphabet, Coding, Letter, Substitution, Word};
use crate::quasifix::{bridge_seed, interior_seed, Qfp, SeedForm};
use crate::window::Window;

/// The `r`-block substitution: letters are the words of length `r` in the language, and the
/// image of a block `w` lists the first `|φ(w_0)|` factors of length `r` of `φ(w)`.
#[derive(Clone, Debug)]
pub struct BlockSubstitution {
    r: usize,
    blocks: Vec<Word>,
    substitution: Substitution,
}

fn block_tokens(alphabet: &Alphabet, blocks: &[Word]) -> Vec<String> {
    let sep = if alphabet.is_compact() { "" } else { "|" };
    let tokens: Vec<String> =
        blocks.iter().map(|w| w.iter().map(|&a| alphabet.token(a)).collect::<Vec<_>>().join(sep)).collect();
    let distinct: BTreeSet<&String> = tokens.iter().collect();
    if distinct.len() == tokens.len() && tokens.iter().all(|t| !t.is_empty() && !t.contains("->") && !t.chars().any(char::is_whitespace)) {
        tokens
    } else {
        (0..blocks.len()).map(|i| format!("#{i}")).collect()
    }
}

impl BlockSubstitution {
    pub fn new(phi: &Substitution, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("block length must be at least 1".into()));
        }
        let blocks: Vec<Word> = language::language(phi, r).into_iter().filter(|w| w.len() == r).collect();
        if blocks.is_empty() {
            return Err(Error::InvalidArgument(format!("the language has no words of length {r}")));
        }
        let alphabet = Alphabet::new(block_tokens(phi.alphabet(), &blocks))?;
        let index = |w: &[Letter]| blocks.binary_search_by(|b| b.as_slice().cmp(w)).ok().map(|i| Letter(i as u32));
        let mut images = Vec::with_capacity(blocks.len());
        for w in &blocks {
            let img = phi.apply(w);
            let n = phi.image(w[0]).len();
            let image = (0..n)
                .map(|i| index(&img[i..i + r]).ok_or_else(|| Error::Invariant("image factor outside the language".into())))
                .collect::<Result<Word>>()?;
            images.push(image);
        }
        let substitution = Substitution::new(alphabet, images)?;
        Ok(BlockSubstitution { r, blocks, substitution })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn substitution(&self) -> &Substitution {
        &self.substitution
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn block(&self, a: Letter) -> &[Letter] {
        &self.blocks[a.idx()]
    }

    pub fn letter_of(&self, w: &[Letter]) -> Option<Letter> {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(w)).ok().map(|i| Letter(i as u32))
    }

    /// `ι_r` on a word: the sequence of its length-`r` factors; empty when the word is shorter.
    pub fn iota_word(&self, w: &[Letter]) -> Result<Word> {
        if w.len() < self.r {
            return Ok(Vec::new());
        }
        w.windows(self.r)
            .map(|f| self.letter_of(f).ok_or_else(|| Error::NotInLanguage(format!("block of length {}", self.r))))
            .collect()
    }

    /// `ι_r` on a window `[lo, hi]`: the window `[lo, hi - r + 1]`.
    pub fn iota(&self, w: &Window) -> Result<Window> {
        Ok(Window::new(w.lo(), self.iota_word(w.letters())?))
    }

    /// The letter-level inverse of `ι_r` on a block window.
    pub fn flatten(&self, w: &Window) -> Window {
        let mut letters: Word = w.letters().iter().map(|&b| self.block(b)[0]).collect();
        if let Some(&last) = w.letters().last() {
            letters.extend_from_slice(&self.block(last)[1..]);
        }
        Window::new(w.lo(), letters)
    }

    /// The same point seen through `ι_r`: same period, power and shift.
    pub fn lift_qfp(&self, phi: &Substitution, q: &Qfp) -> Result<Qfp> {
        let base = Qfp::new(q.seed.clone());
        let r = self.r as i64;
        let block = |lo: i64| -> Result<Letter> {
            let w = base.materialize(phi, lo, lo + r - 1)?;
            self.letter_of(w.letters())
                .ok_or_else(|| Error::NotInLanguage("the point is not in the subshift; it has no block lift".into()))
        };
        let m = q.seed.period;
        let seed = match &q.seed.form {
            SeedForm::Interior { offset, .. } => interior_seed(&self.substitution, block(0)?, *offset, m)?,
            SeedForm::Bridge { .. } => bridge_seed(&self.substitution, block(-1)?, block(0)?, m)?,
        };
        Ok(Qfp { seed, power: q.power, shift: q.shift })
    }
}

pub fn block_substitution(phi: &Substitution, r: usize) -> Result<BlockSubstitution> {
    BlockSubstitution::new(phi, r)
}

/// Summary of the checks made by [`verify_block_laws`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLawReport {
    pub r: usize,
    pub commutations_checked: usize,
    pub language_lengths_checked: usize,
    pub primitive: bool,
    pub block_primitive: bool,
    pub constant_length: Option<usize>,
    pub block_constant_length: Option<usize>,
}

/// Up to `samples` words of length `len`, spread evenly over the language.
fn sample_words(lang: &BTreeSet<Word>, len: usize, samples: usize) -> Vec<Word> {
    let words: Vec<&Word> = lang.iter().filter(|w| w.len() == len).collect();
    if words.len() <= samples {
        return words.into_iter().cloned().collect();
    }
    (0..samples).map(|i| words[i * words.len() / samples].clone()).collect()
}

/// Checks `ι_r ∘ φ^n = φ̂_r^n ∘ ι_r` for `n ≤ 3` on sampled language words, equality of the
/// languages of `ι_r(X_φ)` and `X_{φ̂_r}` up to `max_len`, and transfer of constant length and
/// primitivity. The first failure is returned as an [`Error::Invariant`] with a counterexample.
pub fn verify_block_laws(phi: &Substitution, r: usize, samples: usize, max_len: usize) -> Result<BlockLawReport> {
    let block = BlockSubstitution::new(phi, r)?;
    let hat = block.substitution();
    let render = |w: &[Letter]| phi.alphabet().render(w);
    let sample_len = r + 7;
    let lang = language::language(phi, (max_len + r - 1).max(sample_len));
    let mut checked = 0;
    for u in sample_words(&lang, sample_len, samples) {
        let lifted = block.iota_word(&u)?;
        for n in 1..=3u32 {
            let lhs = block.iota_word(&phi.power(n).apply(&u))?;
            let rhs = hat.power(n).apply(&lifted);
            if rhs.len() > lhs.len() || lhs[..rhs.len()] != rhs[..] {
                return Err(Error::Invariant(format!("ι_{r}(φ^{n}({})) disagrees with φ̂^{n}(ι_{r}(·))", render(&u))));
            }
            checked += 1;
        }
    }
    let hat_lang = language::language(hat, max_len);
    for len in 1..=max_len {
        let from_phi: BTreeSet<Word> = lang
            .iter()
            .filter(|w| w.len() == len + r - 1)
            .map(|w| block.iota_word(w))
            .collect::<Result<_>>()?;
        let from_hat: BTreeSet<Word> = hat_lang.iter().filter(|w| w.len() == len).cloned().collect();
        if from_phi != from_hat {
            let diff = from_phi.symmetric_difference(&from_hat).next().expect("sets differ");
            return Err(Error::Invariant(format!(
                "block languages differ at length {len}: `{}`",
                hat.alphabet().render(diff)
            )));
        }
    }
    let primitive = is_primitive(phi);
    let block_primitive = is_primitive(hat);
    if primitive && !block_primitive {
        return Err(Error::Invariant(format!("φ is primitive but its {r}-block substitution is not")));
    }
    if phi.constant_length() != hat.constant_length() {
        return Err(Error::Invariant(format!("{r}-block substitution changed the length")));
    }
    Ok(BlockLawReport {
        r,
        commutations_checked: checked,
        language_lengths_checked: max_len,
        primitive,
        block_primitive,
        constant_length: phi.constant_length(),
        block_constant_length: hat.constant_length(),
    })
}

/// A factor map in normal form: `y_i = rule(x_{[i-radius, i+radius]})`.
#[derive(Clone, Debug)]
pub struct SlidingBlockCode {
    radius: usize,
    block: BlockSubstitution,
    rule: Coding,
}

impl SlidingBlockCode {
    /// `rule` must be total on the words of length `2·radius + 1` of the language.
    pub fn new(phi: &Substitution, radius: usize, rules: &[(Word, String)]) -> Result<Self> {
        let block = BlockSubstitution::new(phi, 2 * radius + 1)?;
        let mut targets: Vec<String> = Vec::new();
        let mut map: Vec<Option<Letter>> = vec![None; block.blocks().len()];
        for (w, tok) in rules {
            let b = block
                .letter_of(w)
                .ok_or_else(|| Error::NotInLanguage(phi.alphabet().render(w)))?;
            if !targets.contains(tok) {
                targets.push(tok.clone());
            }
            let t = Letter(targets.iter().position(|x| x == tok).expect("pushed") as u32);
            if map[b.idx()].replace(t).is_some_and(|old| old != t) {
                return Err(Error::DuplicateRule { line: 0, token: phi.alphabet().render(w) });
            }
        }
        let target = Alphabet::new(targets)?;
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Error::PartialCoding(phi.alphabet().render(&block.blocks()[i]))))
            .collect::<Result<Vec<_>>>()?;
        let rule = Coding::new(block.substitution().alphabet().clone(), target, map)?;
        Ok(SlidingBlockCode { radius, block, rule })
    }

    /// A letter-to-letter coding seen as a radius-0 code on the letters of the language.
    pub fn from_coding(phi: &Substitution, tau: &Coding) -> Result<Self> {
        let rules: Vec<(Word, String)> = language::letters(phi)
            .into_iter()
            .map(|a| (vec![a], tau.target().token(tau.apply_letter(a)).to_owned()))
            .collect();
        let mut code = SlidingBlockCode::new(phi, 0, &rules)?;
        // Keep the coding's own target order.
        let map = code.rule.source().letters().map(|b| tau.apply_letter(code.block.block(b)[0])).collect();
        code.rule = Coding::new(code.rule.source().clone(), tau.target().clone(), map)?;
        Ok(code)
    }

    /// Parses `code radius=<n>` followed by `rule <w> -> <tok>` lines.
    pub fn parse(phi: &Substitution, text: &str) -> Result<Self> {
        let mut radius = None;
        let mut rules = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: &str| Error::Syntax { line: line_no, message: message.to_owned() };
            if let Some(rest) = line.strip_prefix("code") {
                let n = rest
                    .trim()
                    .strip_prefix("radius=")
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(|| syntax("expected `code radius=<n>`"))?;
                radius = Some(n);
            } else if let Some(rest) = line.strip_prefix("rule") {
                let (lhs, rhs) = rest.split_once("->").ok_or_else(|| syntax("expected `rule <w> -> <tok>`"))?;
                let tok = rhs.trim();
                if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                    return Err(syntax("rule target must be a single token"));
                }
                let w = phi.alphabet().parse_word(lhs).map_err(|e| syntax(&e.to_string()))?;
                rules.push((line_no, w, tok.to_owned()));
            } else {
                return Err(syntax("unrecognised line"));
            }
        }
        let radius = radius.ok_or(Error::Syntax { line: 1, message: "missing `code radius=<n>`".into() })?;
        for (line, w, _) in &rules {
            if w.len() != 2 * radius + 1 {
                return Err(Error::Syntax { line: *line, message: format!("rule word must have length {}", 2 * radius + 1) });
            }
        }
        let rules: Vec<(Word, String)> = rules.into_iter().map(|(_, w, t)| (w, t)).collect();
        SlidingBlockCode::new(phi, radius, &rules)
    }

    pub fn to_text(&self, phi: &Substitution) -> String {
        let mut out = format!("code radius={}\n", self.radius);
        for b in self.rule.source().letters() {
            let w = phi.alphabet().render(self.block.block(b));
            out.push_str(&format!("rule {w} -> {}\n", self.rule.target().token(self.rule.apply_letter(b))));
        }
        out
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn block(&self) -> &BlockSubstitution {
        &self.block
    }

    pub fn rule(&self) -> &Coding {
        &self.rule
    }

    pub fn target(&self) -> &Alphabet {
        self.rule.target()
    }

    /// The image of a window `[lo, hi]`: the window `[lo + n, hi - n]`.
    pub fn apply_window(&self, x: &Window) -> Result<Window> {
        let lifted = self.block.iota(x)?;
        Ok(Window::new(x.lo() + self.radius as i64, self.rule.apply(lifted.letters())))
    }

    /// Rule applied to one block of length `2n + 1`, if it is in the language.
    pub fn apply_block(&self, w: &[Letter]) -> Option<Letter> {
        self.block.letter_of(w).map(|b| self.rule.apply_letter(b))
    }
}

/// The image of a quasi-fixed point under a factor map, with an exact automaton.
#[derive(Clone, Debug)]
pub struct PushedQfp {
    /// The point over the block alphabet whose coding is the image.
    pub lifted: Qfp,
    pub automaton: KernelAutomaton,
}

/// Pushes `q` through the code: lift by `ι_r`, shift by `-radius`, and read the rule as an
/// output coding of the kernel automaton.
pub fn push_qfp(phi: &Substitution, code: &SlidingBlockCode, q: &Qfp) -> Result<PushedQfp> {
    let lifted = code.block.lift_qfp(phi, &q.shifted(-(code.radius as i64)))?;
    let automaton = build_kernel_automaton(code.block.substitution(), &lifted, Some(&code.rule))?;
    Ok(PushedQfp { lifted, automaton })
}

/// Pushes `q` through a plain coding, defined on the whole alphabet.
pub fn push_qfp_coding(phi: &Substitution, tau: &Coding, q: &Qfp) -> Result<KernelAutomaton> {
    build_kernel_automaton(phi, q, Some(tau))
}

/// Longest factor length checked exactly against the language during fiber search.
pub const FIBER_LANGUAGE_LEN: usize = 24;

/// Target length past which preimage counts of nonperiodic targets should no longer grow:
/// twice the radius plus the longest image length.
pub fn fiber_stabilization_length(phi: &Substitution, code: &SlidingBlockCode) -> usize {
    2 * code.radius + phi.max_image_len()
}

/// Preimage windows of a target window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberWindows {
    /// Windows on `[lo - n, hi + n]` whose image is the target.
    pub windows: Vec<Window>,
    /// False when windows were longer than [`FIBER_LANGUAGE_LEN`] and only their factors of
    /// that length were checked against the language.
    pub exact: bool,
    /// True when the search stopped at `max_windows`.
    pub truncated: bool,
}

/// All windows `x` on `[lo - n, hi + n]` in the language with `π(x) = target`.
pub fn fiber_windows(
    phi: &Substitution,
    code: &SlidingBlockCode,
    target: &Window,
    max_windows: usize,
) -> Result<FiberWindows> {
    if target.is_empty() {
        return Err(Error::InvalidArgument("empty target window".into()));
    }
    let target_letters: Word = target.letters().to_vec();
    let n = code.radius;
    let r = 2 * n + 1;
    let total = target_letters.len() + 2 * n;
    let h = total.min(FIBER_LANGUAGE_LEN).max(r);
    let lang = LanguageTable::new(phi);
    let words = lang.up_to(h);
    let mut out = Vec::new();
    let mut truncated = false;
    let mut stack: Vec<Word> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == total {
            out.push(Window::new(target.lo() - n as i64, prefix));
            if out.len() >= max_windows {
                truncated = true;
                break;
            }
            continue;
        }
        for a in phi.letters().rev() {
            let mut next = prefix.clone();
            next.push(a);
            let tail = &next[next.len().saturating_sub(h)..];
            if !words.contains(tail) {
                continue;
            }
            if next.len() >= r {
                let i = next.len() - r;
                if code.apply_block(&next[i..]) != Some(target_letters[i]) {
                    continue;
                }
            }
            stack.push(next);
        }
    }
    out.sort();
    Ok(FiberWindows { windows: out, exact: total <= FIBER_LANGUAGE_LEN, truncated })
}

/// Detection result for one preimage branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberBranch {
    pub window: Window,
    pub detection: Detection,
}

/// Certification of the fiber over `π(q)`: every preimage window of the image on `[-radius, radius]`
/// is run through [`detect_qfp`]. Inconclusive branches are kept in the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCertificate {
    pub branches: Vec<FiberBranch>,
    pub exact: bool,
    pub truncated: bool,
}

impl FiberCertificate {
    pub fn all_found(&self) -> bool {
        !self.truncated && self.branches.iter().all(|b| matches!(b.detection, Detection::Found { .. }))
    }
}

pub fn certify_fiber_qfp(
    phi: &Substitution,
    code: &SlidingBlockCode,
    q: &Qfp,
    radius: i64,
    depth: usize,
    max_windows: usize,
) -> Result<FiberCertificate> {
    let image = push_qfp(phi, code, q)?;
    let letters: Word = (-radius..=radius).map(|i| image.automaton.eval(i)).collect();
    let target = Window::new(-radius, letters);
    let fiber = fiber_windows(phi, code, &target, max_windows)?;
    let branches = fiber
        .windows
        .into_iter()
        .map(|w| Ok(FiberBranch { detection: detect_qfp(phi, &w, depth)?, window: w }))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberCertificate { branches, exact: fiber.exact, truncated: fiber.truncated })
}

/// A minimal subsystem, generated by the primitive restriction of a power of `φ` to the letters
/// reachable from `letter`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalSubsystem {
    pub letter: Letter,
    pub letters: BTreeSet<Letter>,
    pub restriction: Substitution,
    /// Power of `φ` the restriction is taken from.
    pub power: u32,
}

/// Minimal subsystems: after raising `φ` to its ambi-idempotent power, the letters `b` whose
/// reachable alphabet carries a primitive restriction, one per reachable alphabet.
pub fn minimal_subsystems(phi: &Substitution) -> Result<Vec<MinimalSubsystem>> {
    let power = u32::try_from(analysis::prolongability(phi).n_amb).map_err(|_| Error::Overflow("power"))?;
    let psi = phi.power(power);
    let mut seen: BTreeSet<BTreeSet<Letter>> = BTreeSet::new();
    let mut out = Vec::new();
    for b in psi.letters() {
        let letters = reachable_alphabet(&psi, b);
        if seen.contains(&letters) {
            continue;
        }
        let restriction = restrict(&psi, &letters)?;
        if is_primitive(&restriction) {
            seen.insert(letters.clone());
            out.push(MinimalSubsystem { letter: b, letters, restriction, power });
        }
    }
    Ok(out)
}
