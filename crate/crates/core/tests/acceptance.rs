//! The twelve acceptance criteria, each at its stated tolerance. Every criterion prints one
//! PASS/FAIL line; the test fails if any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use symdyn::analysis::prolongability;
use symdyn::blocks::{fiber_windows, verify_block_laws, SlidingBlockCode};
use symdyn::catalog::{self, appendix_prefix, thue_morse, thue_morse_z};
use symdyn::corpus::constant_length_corpus;
use symdyn::desub::{desub_digits, disjoint_factorization_count};
use symdyn::kernel::{build_kernel_automaton, check_column_constant, column_constant_power, equal_sequences};
use symdyn::language::{self, pair_language};
use symdyn::onesided::interpretation_count;
use symdyn::quasifix::{enumerate_seeds, Qfp};
use symdyn::window::image_window;
use symdyn::{kappa, Coding, KAdicRational, Letter, Substitution, Window, Word};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> &'static [Substitution] {
    static CORPUS: std::sync::OnceLock<Vec<Substitution>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(|| constant_length_corpus(2, 3))
}

/// Every seed of period `m ≤ 3` of every corpus substitution.
fn corpus_points() -> Vec<(usize, Qfp)> {
    let mut out = Vec::new();
    for (i, phi) in corpus().iter().enumerate() {
        for m in 1..=3 {
            for seed in enumerate_seeds(phi, m).unwrap() {
                out.push((i, Qfp::new(seed)));
            }
        }
    }
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn c1_iteration() -> Outcome {
    let phi = thue_morse();
    let p4 = phi.power(4);
    let a = phi.alphabet().render(p4.image(Letter(0)));
    let b = phi.alphabet().render(p4.image(Letter(1)));
    ensure(a == "0110100110010110" && b == "1001011001101001", || format!("φ^4 = {a}, {b}"))?;
    Ok(format!("φ^4(0)={a} φ^4(1)={b}"))
}

fn c2_relation() -> Outcome {
    let phi = thue_morse();
    let z = thue_morse_z();
    let n = 10_000i64;
    // z_n = φ^4(z)_{n+5}, read from an independently expanded image window.
    let x = z.materialize(&phi, -n, n).map_err(|e| e.to_string())?;
    let src = z.materialize(&phi, -n / 16 - 2, n / 16 + 2).map_err(|e| e.to_string())?;
    let img = image_window(&phi.power(4), &src);
    let mismatches = (-n..=n).filter(|&i| x.get(i) != img.get(i + 5)).count();
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    ensure(z.verify(&phi, n).map_err(|e| e.to_string())?, || "verify failed".into())?;
    Ok(format!("T^5(φ^4(z)) = z on [-{n}, {n}], 0 mismatches"))
}

fn c3_kadic() -> Outcome {
    let phi = thue_morse();
    let z = thue_morse_z();
    let k = kappa(&phi, &z).map_err(|e| e.to_string())?;
    let third = KAdicRational::new(-1, 3, 2).unwrap();
    ensure(k == third, || format!("κ(z) = {}", k.fraction()))?;
    let e = k.expansion();
    ensure(e.preperiod().is_empty() && e.cycle() == [1, 0], || format!("expansion {e}"))?;
    let d = desub_digits(&phi, &z).map_err(|e| e.to_string())?.expansion;
    ensure(d == e, || format!("desub digits {d} differ from κ digits {e}"))?;
    let kt = kappa(&phi, &z.shifted(1)).map_err(|e| e.to_string())?;
    ensure(kt == KAdicRational::new(2, 3, 2).unwrap(), || format!("κ(Tz) = {}", kt.fraction()))?;
    // Chain of the relation: 16·κ + 5 = κ.
    ensure(third.times_k().times_k().times_k().times_k().add_int(5) == third, || "relation identity".into())?;
    Ok(format!("κ(z) = {} digits {e}; κ(Tz) = {}", k.fraction(), kt.fraction()))
}

fn c4_language() -> Outcome {
    let phi = catalog::remark();
    let letters: BTreeSet<Letter> = language::letters(&phi);
    ensure(letters == BTreeSet::from([Letter(1), Letter(2)]), || format!("L^1 = {letters:?}"))?;
    let pairs = pair_language(&phi);
    let want: BTreeSet<(Letter, Letter)> =
        [(1, 1), (1, 2), (2, 1), (2, 2)].iter().map(|&(a, b)| (Letter(a), Letter(b))).collect();
    ensure(pairs == want, || format!("pairs {pairs:?}"))?;
    Ok("L^1 = {1,2}, L^2 = {11,12,21,22}".into())
}

fn c5_fiber() -> Outcome {
    let (phi, tau) = catalog::fiber();
    let code = SlidingBlockCode::from_coding(&phi, &tau).map_err(|e| e.to_string())?;
    let two = tau.target().letter("2").unwrap();
    let mut counts = Vec::new();
    for len in 1..=16usize {
        counts.push(fiber_windows(&phi, &code, &Window::new(0, vec![two; len]), 1 << 20).unwrap().windows.len());
    }
    ensure(counts[15] > 8, || format!("count at L=16 is {}", counts[15]))?;
    let t = thue_morse();
    let id = SlidingBlockCode::from_coding(&t, &Coding::identity(t.alphabet())).unwrap();
    let z = thue_morse_z();
    for len in [8i64, 9, 12, 16, 32, 64, 128] {
        for start in [-40i64, 0, 17] {
            let target = z.materialize(&t, start, start + len - 1).unwrap();
            let n = fiber_windows(&t, &id, &target, 16).unwrap().windows.len();
            ensure(n == 1, || format!("identity fiber of length {len} at {start} has {n} windows"))?;
        }
    }
    Ok(format!("constant-2 counts L=4,8,16: {}, {}, {}; TM identity fibers all 1", counts[3], counts[7], counts[15]))
}

/// Independent oracle for quasi-fixed points of `ψ = φ^m` with offset `c`: positions contract
/// under `n ↦ ⌊(n + c)/K⌋` onto one or two fixed positions, whose letters `a` must satisfy
/// `ψ(a)[n + c - Kn] = a`; every other letter is read from the image of its parent position.
fn relation_points(psi: &Substitution, c: i64, radius: i64) -> Vec<Window> {
    let kk = psi.constant_length().unwrap() as i64;
    let parent = |n: i64| (n + c).div_euclid(kk);
    let fixed: Vec<i64> = ((-3 * kk.abs() - c.abs())..=(3 * kk.abs() + c.abs())).filter(|&n| parent(n) == n).collect();
    let choices: Vec<Vec<Letter>> = fixed
        .iter()
        .map(|&n| psi.letters().filter(|&a| psi.image(a)[(n + c - kk * n) as usize] == a).collect())
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; fixed.len()];
    if choices.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let mut memo: HashMap<i64, Letter> = fixed.iter().zip(&pick).zip(&choices).map(|((&n, &i), ch)| (n, ch[i])).collect();
        fn letter(n: i64, psi: &Substitution, kk: i64, c: i64, memo: &mut HashMap<i64, Letter>) -> Letter {
            if let Some(&a) = memo.get(&n) {
                return a;
            }
            let p = (n + c).div_euclid(kk);
            let a = psi.image(letter(p, psi, kk, c, memo))[(n + c - kk * p) as usize];
            memo.insert(n, a);
            a
        }
        let w: Word = (-radius..=radius).map(|n| letter(n, psi, kk, c, &mut memo)).collect();
        out.push(Window::new(-radius, w));
        let mut i = 0;
        loop {
            if i == pick.len() {
                return out;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn c6_oracle_completeness() -> Outcome {
    let radius = 200;
    let (mut relations, mut seeds_checked) = (0usize, 0usize);
    for phi in corpus() {
        for m in 1..=3u32 {
            let psi = phi.power(m);
            let kk = psi.constant_length().unwrap() as i64;
            let seeds = enumerate_seeds(phi, m).map_err(|e| e.to_string())?;
            for s in &seeds {
                let q = Qfp::new(s.clone());
                ensure(q.verify(phi, radius).unwrap(), || format!("{} seed {:?} fails", phi.to_text(), s))?;
                seeds_checked += 1;
            }
            for c in -2 * kk..3 * kk {
                for w in relation_points(&psi, c, radius) {
                    relations += 1;
                    let explained = seeds.iter().any(|s| {
                        let c0 = s.base_offset() as i64;
                        let drift = 1 - kk;
                        (c - c0) % drift == 0 && {
                            let q = Qfp::new(s.clone()).shifted((c - c0) / drift);
                            q.relation(phi).unwrap().offset == c && q.materialize(phi, -radius, radius).unwrap() == w
                        }
                    });
                    ensure(explained, || {
                        format!("{} m={m} c={c}: {} unexplained", phi.to_text().replace('\n', "; "), w.render(phi.alphabet()))
                    })?;
                }
            }
        }
    }
    Ok(format!("{} substitutions, {relations} relation points explained, {seeds_checked} seeds verified", corpus().len()))
}

/// Distinct sequences `n ↦ z_{k^j n + i}`, `j ≤ depth`, compared on `|n| ≤ radius`.
/// Letters of a quasi-fixed point far from the origin, read through its relation
/// `z_n = φ^m(z_p)[n + c − K p]` with `p = ⌊(n + c)/K⌋`, down to a materialized base window.
struct RelationReader<'a> {
    psi: Substitution,
    kk: i64,
    c: i64,
    base: &'a Window,
}

impl<'a> RelationReader<'a> {
    fn new(phi: &Substitution, q: &Qfp, base: &'a Window) -> Self {
        let rel = q.relation(phi).unwrap();
        let psi = phi.power(rel.period);
        let kk = psi.constant_length().unwrap() as i64;
        RelationReader { psi, kk, c: rel.offset, base }
    }

    fn letter(&self, mut n: i64) -> Letter {
        let mut offsets = Vec::new();
        let mut a = loop {
            if let Some(a) = self.base.get(n) {
                break a;
            }
            let p = (n + self.c).div_euclid(self.kk);
            offsets.push((n + self.c - self.kk * p) as usize);
            n = p;
        };
        for &o in offsets.iter().rev() {
            a = self.psi.image(a)[o];
        }
        a
    }
}

const KERNEL_MAX_CLASSES: usize = 5000;

/// Distinct kernel subsequences `n ↦ z(k^j n + i)` compared on `|n| ≤ radius`. Classes are
/// explored breadth first and only new classes are expanded, since a subsequence's children
/// are determined by the subsequence. Returns the class count and the deepest level reached.
fn kernel_oracle(z: &RelationReader, k: i64, radius: i64) -> Option<(usize, u32)> {
    let window = |kj: i64, i: i64| -> Vec<Letter> { (-radius..=radius).map(|n| z.letter(kj * n + i)).collect() };
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::from([window(1, 0)]);
    let mut queue = std::collections::VecDeque::from([(0u32, 1i64, 0i64)]);
    let mut deepest = 0;
    while let Some((j, kj, i)) = queue.pop_front() {
        for d in 0..k {
            let (kj2, i2) = (kj.checked_mul(k)?, i + d * kj);
            if seen.insert(window(kj2, i2)) {
                if seen.len() > KERNEL_MAX_CLASSES {
                    return None;
                }
                deepest = deepest.max(j + 1);
                queue.push_back((j + 1, kj2, i2));
            }
        }
    }
    Some((seen.len(), deepest))
}

fn c7_kernel() -> Outcome {
    let (eval_radius, kradius) = (10_000i64, 1000i64);
    let points = corpus_points();
    let (mut mismatched_sizes, mut beyond_six) = (Vec::new(), 0);
    for (i, q) in &points {
        let phi = &corpus()[*i];
        let parity = Coding::new(
            phi.alphabet().clone(),
            symdyn::Alphabet::new(["e", "o"]).unwrap(),
            phi.letters().map(|a| Letter(a.0 % 2)).collect(),
        )
        .unwrap();
        let a = build_kernel_automaton(phi, q, None).map_err(|e| e.to_string())?;
        let b = build_kernel_automaton(phi, q, Some(&parity)).map_err(|e| e.to_string())?;
        let w = q.materialize(phi, -eval_radius, eval_radius).map_err(|e| e.to_string())?;
        for n in -eval_radius..=eval_radius {
            let x = w.get(n).unwrap();
            ensure(a.eval(n) == x && b.eval(n) == parity.apply_letter(x), || {
                format!("{} {}: eval differs at {n}", phi.to_text().replace('\n', "; "), q.to_text(phi.alphabet()).trim())
            })?;
        }
        let label = || format!("{} {}", phi.to_text().replace('\n', "; "), q.to_text(phi.alphabet()).trim());
        let (oracle, depth) = kernel_oracle(&RelationReader::new(phi, q, &w), 2, kradius)
            .ok_or_else(|| format!("{}: more than {KERNEL_MAX_CLASSES} oracle classes", label()))?;
        if depth > 6 {
            beyond_six += 1;
        }
        let size = a.kernel_size();
        if size != oracle {
            mismatched_sizes.push(format!("{}: automaton {size}, oracle {oracle}", label()));
        }
    }
    ensure(mismatched_sizes.is_empty(), || format!("{} kernel size mismatches, first: {}", mismatched_sizes.len(), mismatched_sizes[0]))?;
    Ok(format!(
        "{} points, eval on ±{eval_radius} with and without coding, kernel sizes match ({beyond_six} kernels need depth > 6)",
        points.len()
    ))
}

fn c8_block_laws() -> Outcome {
    let (mut n, mut failures, mut full_alphabet_failures) = (0, Vec::new(), 0);
    for phi in corpus() {
        for r in 1..=3 {
            n += 1;
            if let Err(e) = verify_block_laws(phi, r, 100, 10) {
                if language::letters(phi).len() == phi.size() {
                    full_alphabet_failures += 1;
                }
                failures.push(format!("{} r={r}: {e}", phi.to_text().replace('\n', "; ")));
            }
        }
    }
    match failures.first() {
        None => Ok(format!("{n} (substitution, r) pairs, commutation n ≤ 3 and L^≤10 equality")),
        Some(first) => Err(format!(
            "{} of {n} (substitution, r) pairs fail ({full_alphabet_failures} with L^1 = A), first: {first}",
            failures.len()
        )),
    }
}

fn c9_powers() -> Outcome {
    let profile = prolongability(&thue_morse());
    ensure(profile.n_amb == 2, || format!("n_amb(TM) = {}", profile.n_amb))?;
    ensure(profile.n_amb_bound == 2u32.into(), || format!("bound {}", profile.n_amb_bound))?;
    let mut max_n = 0;
    for phi in corpus() {
        let n = column_constant_power(phi).map_err(|e| e.to_string())?;
        ensure(check_column_constant(phi, n).unwrap(), || format!("{} n={n}", phi.to_text().replace('\n', "; ")))?;
        max_n = max_n.max(n);
    }
    Ok(format!("n_amb(TM)=2 ≤ 2!, column-constant post-check on {} substitutions (max power {max_n})", corpus().len()))
}

fn has_period(w: &[Letter]) -> bool {
    (1..=w.len() / 2).any(|p| (p..w.len()).all(|i| w[i] == w[i - p]))
}

fn c10_critical_factorization() -> Outcome {
    let radius = 1000;
    let (mut windows, mut worst) = (0usize, 0usize);
    let mut subjects: Vec<(Substitution, Qfp)> =
        corpus_points().into_iter().filter(|(_, q)| q.seed.period == 1).map(|(i, q)| (corpus()[i].clone(), q)).collect();
    subjects.push((thue_morse(), thue_morse_z()));
    for (phi, q) in &subjects {
        if !q.seed.in_system {
            continue;
        }
        let y = q.materialize(phi, -radius, radius).unwrap();
        if y.period(y.len() / 2).is_some() {
            continue;
        }
        for m in [2u32, 4] {
            let pm = phi.power(m);
            let words: Vec<Word> = phi.letters().map(|a| pm.image(a).to_vec()).collect::<BTreeSet<_>>().into_iter().collect();
            let two = disjoint_factorization_count(&y, &words).map_err(|e| e.to_string())?;
            // One-sided sequences: the whole window, and the suffix at the origin when it is
            // itself nonperiodic (it can be periodic, e.g. the right half of 0^ω.10^ω).
            let suffix = &y.letters()[radius as usize..];
            let mut one = interpretation_count(y.letters(), &words).map_err(|e| e.to_string())?;
            if !has_period(suffix) {
                let c = interpretation_count(suffix, &words).map_err(|e| e.to_string())?;
                if c.count > one.count {
                    one = c;
                }
            }
            ensure(two.count <= words.len() && one.count <= words.len(), || {
                format!("{}: counts {} / {} exceed |W| = {}", phi.to_text().replace('\n', "; "), two.count, one.count, words.len())
            })?;
            worst = worst.max(two.count).max(one.count);
            windows += 1;
        }
    }
    ensure(windows > 0, || "no nonperiodic windows".into())?;
    Ok(format!("{windows} (window, W) pairs, largest disjoint family {worst}"))
}

fn c11_appendix() -> Outcome {
    let (phi, tau) = catalog::appendix();
    let n = 1000;
    let x = appendix_prefix(&phi, n + 1);
    let tx = tau.apply(&x[..n]);
    ensure(tx[0] == Letter(1) && tx[1..].iter().all(|&a| a == Letter(0)), || "τ(x) is not 1 0 0 …".into())?;
    ensure(tau.apply(&x[1..=n]).iter().all(|&a| a == Letter(0)), || "τ(Tx) is not 0 0 0 …".into())?;
    ensure((1..n).all(|p| tx[p] != tx[0]), || "τ(x) periodic".into())?;
    // x = φ(x') and x' = T(φ(x')).
    let img = phi.apply(&x[1..=n]);
    ensure(img[..n] == x[..n] && img[1..=n] == x[1..=n], || "x = φ(x'), x' = T(φ(x')) fail".into())?;

    let (phi2, _) = catalog::two_sided();
    let x1 = Qfp::new(symdyn::quasifix::bridge_seed(&phi2, Letter(1), Letter(2), 2).unwrap());
    let x2 = Qfp::new(symdyn::quasifix::bridge_seed(&phi2, Letter(3), Letter(4), 2).unwrap());
    let r = 1000;
    let w1 = x1.materialize(&phi2, -r, r).unwrap();
    let src = x2.materialize(&phi2, -r / 4 - 2, r / 4 + 2).unwrap();
    ensure(image_window(&phi2, &src).agrees_with(&w1), || "φ(x'') ≠ x'".into())?;
    for report in ["appendix", "two-sided"].into_iter().flat_map(|n| catalog::run_paper_examples(Some(n)).unwrap()) {
        for c in &report.checks {
            ensure(c.passed, || format!("{}: {} ({})", report.name, c.anchor, c.detail))?;
        }
    }
    Ok("τ(x) = 10^ω nonperiodic, τ(Tx) = 0^ω, R_φ(x') = x'' on radius 1000".into())
}

fn c12_club() -> Outcome {
    let ex = catalog::club().map_err(|e| e.to_string())?;
    let xw = ex.x.materialize(&ex.base, -1000, 1000).unwrap();
    ensure(xw.period(1000).is_none(), || "x periodic".into())?;
    let d1 = desub_digits(&ex.theta, &ex.x_prime).map_err(|e| e.to_string())?.expansion;
    let d2 = desub_digits(&ex.theta, &ex.x_double).map_err(|e| e.to_string())?.expansion;
    ensure(d1.prefix(8) == [1, 0, 0, 0, 0, 0, 0, 0] && d1.preperiod() == [1] && d1.cycle() == [0], || format!("c(x') = {d1}"))?;
    ensure(d2.prefix(8) == [0; 8] && d2.preperiod().is_empty() && d2.cycle() == [0], || format!("c(x'') = {d2}"))?;
    let a1 = build_kernel_automaton(&ex.theta, &ex.x_prime, Some(&ex.tau)).unwrap();
    let a2 = build_kernel_automaton(&ex.theta, &ex.x_double, Some(&ex.tau)).unwrap();
    ensure(equal_sequences(&a1, &a2), || "τ(x') ≠ τ(x'')".into())?;
    Ok(format!("c(x') = {d1}, c(x'') = {d2}, τ(x') = τ(x'') exactly"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("Thue–Morse iteration", c1_iteration),
        ("quasi-fixed relation", c2_relation),
        ("k-adic address", c3_kadic),
        ("language", c4_language),
        ("fiber dichotomy", c5_fiber),
        ("oracle completeness", c6_oracle_completeness),
        ("kernel/DFAO exactness", c7_kernel),
        ("block laws", c8_block_laws),
        ("column/idempotent powers", c9_powers),
        ("critical-factorization bound", c10_critical_factorization),
        ("appendix reproduction", c11_appendix),
        ("♣-example digit distinctness", c12_club),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                println!("criterion {:>2} FAIL {name}: {detail} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
