//! One function per subcommand. Each returns a [`Report`] or a [`Failure`].

use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{json, Value};
use symdyn::analysis;
use symdyn::blocks::{
    certify_fiber_qfp, fiber_stabilization_length, fiber_windows, minimal_subsystems, push_qfp, verify_block_laws,
    BlockSubstitution, SlidingBlockCode,
};
use symdyn::catalog;
use symdyn::desub::{desub_digits, desubstitute_window, detect_qfp, Detection};
use symdyn::format::{load_substitution, SubstitutionFile};
use symdyn::kernel::{build_kernel_automaton, column_constant_power};
use symdyn::language::{self, LanguageTable};
use symdyn::onesided::{interpretation_count, onesided_desub, parse_onesided_window, prolong_two_sided, OneSidedQfp};
use symdyn::quasifix::{dedup, enumerate_seeds, minimal_period, Qfp};
use symdyn::{kappa, Alphabet, KAdicRational, Letter, Substitution, Window, Word};

use crate::report::{CmdResult, Failure, Report};

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn load(path: &Path, allow_nongrowing: bool) -> Result<SubstitutionFile, Failure> {
    load_substitution(&read(path)?, allow_nongrowing).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn letter_set(alphabet: &Alphabet, letters: impl IntoIterator<Item = Letter>) -> Vec<String> {
    letters.into_iter().map(|a| alphabet.token(a).to_owned()).collect()
}

fn letter_list(alphabet: &Alphabet, letters: &[Letter]) -> String {
    if letters.is_empty() {
        "none".to_owned()
    } else {
        letter_set(alphabet, letters.iter().copied()).join(" ")
    }
}

/// Words joined for display; compact alphabets render words without spaces, so a space suffices.
fn join_words(alphabet: &Alphabet, words: &[String]) -> String {
    words.join(if alphabet.is_compact() { " " } else { ", " })
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(","))
}

fn window_json(alphabet: &Alphabet, w: &Window) -> Value {
    json!(w.render(alphabet))
}

pub fn analyze(path: &Path, allow_nongrowing: bool) -> CmdResult {
    let file = load(path, allow_nongrowing)?;
    let phi = &file.substitution;
    let alpha = phi.alphabet();
    let a = analysis::analyze(phi);
    let l1 = letter_set(alpha, language::letters(phi));
    let l2: Vec<String> = language::pair_language(phi).iter().map(|&(x, y)| alpha.render(&[x, y])).collect();
    let mut r = Report::new();
    r.line(format!("alphabet: {}", alpha.tokens().join(" ")));
    match a.constant_length {
        Some(k) => r.line(format!("constant length: {k}")),
        None => r.line("constant length: no"),
    };
    r.line(format!("growing: {}", yes_no(a.growing)));
    if !a.bounded_letters.is_empty() {
        r.line(format!("bounded letters: {}", letter_list(alpha, &a.bounded_letters)));
    }
    r.line(format!("primitive: {}", yes_no(a.primitive)));
    r.line(format!("L¹={}", braces(&l1)));
    r.line(format!("L²={}", braces(&l2)));
    let outside: Vec<String> = alpha.tokens().iter().filter(|t| !l1.contains(t)).cloned().collect();
    if !outside.is_empty() {
        r.line(format!("letters outside the subshift: {}", outside.join(" ")));
    }
    let p = &a.profile;
    r.line(format!("right-prolongable: {}", letter_list(alpha, &p.right_prolongable)));
    r.line(format!("left-prolongable: {}", letter_list(alpha, &p.left_prolongable)));
    r.line(format!("n_amb: {} (bound |A|! = {})", p.n_amb, p.n_amb_bound));
    r.set("alphabet", alpha.tokens().to_vec())
        .set("constant_length", a.constant_length)
        .set("growing", a.growing)
        .set("primitive", a.primitive)
        .set("letters", l1.clone())
        .set("pairs", l2.clone())
        .set("n_amb", p.n_amb)
        .set("n_amb_bound", p.n_amb_bound.to_string());
    if a.constant_length.is_some() {
        let n = column_constant_power(phi)?;
        r.line(format!("column-constant power: {n}"));
        r.set("column_constant_power", n);
    }
    if a.growing {
        let subs = minimal_subsystems(phi)?;
        let mut js = Vec::new();
        for s in &subs {
            let letters = letter_set(alpha, s.letters.iter().copied());
            r.line(format!("minimal subsystem: letters {} from φ^{}", braces(&letters), s.power));
            js.push(json!({ "letters": letters, "power": s.power }));
        }
        r.set("minimal_subsystems", js);
    }
    if let Some(c) = &file.coding {
        let pairs: Vec<String> =
            phi.letters().map(|a| format!("{}->{}", alpha.token(a), c.target().token(c.apply_letter(a)))).collect();
        r.line(format!("coding: {}", pairs.join(" ")));
    }
    Ok(r)
}

pub fn language(path: &Path, max_len: usize, contains: Option<&str>) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let alpha = phi.alphabet();
    let words = language::language(phi, max_len);
    let mut r = Report::new();
    let mut by_len = serde_json::Map::new();
    for len in 1..=max_len {
        let ws: Vec<String> = words.iter().filter(|w| w.len() == len).map(|w| alpha.render(w)).collect();
        r.line(format!("L^{len} ({}): {}", ws.len(), join_words(alpha, &ws)));
        by_len.insert(len.to_string(), json!(ws));
    }
    r.set("words", Value::Object(by_len));
    if let Some(w) = contains {
        let word = alpha.parse_word(w)?;
        let inside = language::contains(phi, &word);
        r.line(format!("contains {}: {}", alpha.render(&word), yes_no(inside)));
        r.set("contains", inside);
    }
    Ok(r)
}

fn qfp_json(phi: &Substitution, q: &Qfp, radius: i64) -> Result<(String, Value), Failure> {
    let alpha = phi.alphabet();
    let rel = q.relation(phi)?;
    let w = q.materialize(phi, -radius, radius)?;
    let text = q.to_text(alpha);
    let outside = if q.seed.in_system { "" } else { " (outside the subshift)" };
    let line = format!("{text} | {rel} | {}{outside}", w.render(alpha));
    let js = json!({
        "seed": text,
        "relation": { "period": rel.period, "offset": rel.offset, "text": rel.to_string() },
        "window": window_json(alpha, &w),
        "in_system": q.seed.in_system,
    });
    Ok((line, js))
}

pub fn qfp_list(path: &Path, period: u32, dedup_points: bool, radius: i64) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let mut points: Vec<Qfp> = enumerate_seeds(phi, period)?.into_iter().map(Qfp::new).collect();
    if dedup_points {
        points = dedup(phi, &points)?;
    }
    let mut r = Report::new();
    r.line(format!("{} quasi-fixed points of period {period}", points.len()));
    let mut js = Vec::new();
    for q in &points {
        let (line, j) = qfp_json(phi, q, radius)?;
        r.line(line);
        js.push(j);
    }
    r.set("points", js);
    Ok(r)
}

pub fn qfp_show(path: &Path, seed: &str, radius: i64) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let alpha = phi.alphabet();
    let q = Qfp::parse(phi, seed)?;
    let rel = q.relation(phi)?;
    let w = q.materialize(phi, -radius, radius)?;
    let mut r = Report::new();
    r.line(q.to_text(alpha));
    r.line(format!("relation: {rel}"));
    r.line(format!("in subshift: {}", yes_no(q.seed.in_system)));
    r.line(format!("window: {}", w.render(alpha)));
    r.set("seed", q.to_text(alpha))
        .set("relation", rel.to_string())
        .set("in_system", q.seed.in_system)
        .set("window", window_json(alpha, &w));
    if phi.constant_length().is_some() {
        let m = minimal_period(phi, &q)?;
        let k = kappa(phi, &q)?;
        let digits = desub_digits(phi, &q)?;
        r.line(format!("minimal period: {m}"));
        r.line(format!("address: {}; digits {}", k.fraction(), digits.expansion));
        r.set("minimal_period", m).set("address", k.fraction()).set("digits", digits.expansion.to_string());
        if let Some(p) = digits.periodic {
            r.warn(format!("point is shift-periodic with period {p}; its digit stream need not be unique"));
            r.set("shift_period", p);
        }
    }
    Ok(r)
}

pub fn qfp_verify(path: &Path, seed: &str, radius: i64) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let q = Qfp::parse(phi, seed)?;
    let rel = q.relation(phi)?;
    let ok = q.verify(phi, radius)?;
    let mut r = Report::new();
    if ok {
        r.line(format!("OK: {rel}"));
    } else {
        r.line(format!("FAIL: {rel} does not hold on [-{radius}, {radius}]"));
        r.fail();
    }
    r.set("relation", rel.to_string()).set("radius", radius).set("verified", ok);
    Ok(r)
}

fn detection_report(r: &mut Report, alpha: &Alphabet, d: &Detection) {
    match d {
        Detection::Found { point, relation, digits, level } => {
            let ds: String = digits.iter().map(u32::to_string).collect();
            r.line(format!("found: {} | {relation} | level {level} | digits {ds}", point.to_text(alpha)));
            r.set("detection", json!({ "kind": "found", "point": point.to_text(alpha), "relation": relation.to_string(), "level": level, "digits": digits }));
        }
        Detection::Ambiguous { level, branches } => {
            r.line(format!("ambiguous: {} desubstitutions at level {level}", branches.len()));
            r.set("detection", json!({ "kind": "ambiguous", "level": level, "branches": branches.len() }));
        }
        Detection::NoRepetition { depth } => {
            r.line(format!("no repetition up to depth {depth}"));
            r.set("detection", json!({ "kind": "no_repetition", "depth": depth }));
        }
        Detection::Exhausted { level } => {
            r.line(format!("exhausted at level {level}"));
            r.set("detection", json!({ "kind": "exhausted", "level": level }));
        }
    }
}

pub fn desub(path: &Path, window: Option<&str>, seed: Option<&str>, depth: usize) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let alpha = phi.alphabet();
    let mut r = Report::new();
    if let Some(w) = window {
        let w = Window::parse(alpha, w)?;
        let steps = desubstitute_window(phi, &LanguageTable::new(phi), &w);
        r.line(format!("{} desubstitution steps", steps.len()));
        let mut js = Vec::new();
        for s in &steps {
            r.line(format!("  c={} pred={}", s.c, s.pred.render(alpha)));
            js.push(json!({ "c": s.c, "pred": window_json(alpha, &s.pred) }));
        }
        r.set("steps", js);
        detection_report(&mut r, alpha, &detect_qfp(phi, &w, depth)?);
    }
    if let Some(s) = seed {
        let q = Qfp::parse(phi, s)?;
        let d = desub_digits(phi, &q)?;
        r.line(format!("digits {}", d.expansion));
        r.set("digits", d.expansion.to_string());
        if let Some(p) = d.periodic {
            r.warn(format!("point is shift-periodic with period {p}; its digit stream need not be unique"));
        }
    }
    Ok(r)
}

pub enum Export {
    Text,
    Dot,
}

pub fn kernel(path: &Path, seed: &str, use_coding: bool, export: Option<Export>, eval_radius: i64) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let q = Qfp::parse(phi, seed)?;
    let coding = if use_coding {
        Some(file.coding.as_ref().ok_or_else(|| Failure::Validation("--coding given but the file has no coding".into()))?)
    } else {
        None
    };
    let raw = build_kernel_automaton(phi, &q, coding)?;
    let min = raw.minimize();
    let digits = desub_digits(phi, &q)?;
    let out_alpha = min.alphabet().clone();
    let evals: Word = (-eval_radius..=eval_radius).map(|n| min.eval(n)).collect();
    let mut r = Report::new();
    r.line(format!("base: {}", min.base()));
    r.line(format!("raw states: {}", raw.len()));
    r.line(format!("kernel size: {}", min.kernel_size()));
    r.line(format!("digits {}", digits.expansion));
    match digits.periodic {
        Some(p) => {
            r.line(format!("periodic: shift period {p}"));
            r.warn("desubstitution of a periodic point need not be unique");
        }
        None => {
            r.line("periodic: no");
        }
    }
    r.line(format!("eval on [-{eval_radius}, {eval_radius}]: {}", out_alpha.render(&evals)));
    r.set("base", min.base())
        .set("raw_states", raw.len())
        .set("kernel_size", min.kernel_size())
        .set("digits", digits.expansion.to_string())
        .set("shift_period", digits.periodic)
        .set("eval", window_json(&out_alpha, &Window::new(-eval_radius, evals)));
    match export {
        Some(Export::Text) => {
            let t = min.to_text();
            r.line(t.trim_end().to_owned());
            r.set("export", t);
        }
        Some(Export::Dot) => {
            let t = min.to_dot();
            r.line(t.trim_end().to_owned());
            r.set("export", t);
        }
        None => {}
    }
    Ok(r)
}

fn kadic_lines(r: &mut Report, v: &KAdicRational) {
    let e = v.expansion();
    r.line(format!("{}; digits {e}", v.fraction()));
    r.set("value", v.fraction()).set("base", v.base()).set("digits", e.to_string());
}

pub fn kadic_relation(c: i64, m: u32, k: u32) -> CmdResult {
    let v = KAdicRational::from_relation(c, m, k)?;
    let mut r = Report::new();
    kadic_lines(&mut r, &v);
    Ok(r)
}

pub fn kadic_expand(fraction: &str, k: u32) -> CmdResult {
    let bad = || Failure::Validation(format!("expected p/q with integers, got `{fraction}`"));
    let (p, q) = match fraction.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
        None => (fraction.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    let v = KAdicRational::new(p, q, k)?;
    let mut r = Report::new();
    kadic_lines(&mut r, &v);
    Ok(r)
}

pub fn block(path: &Path, radius: usize, verify: bool, samples: usize, max_len: usize) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let b = BlockSubstitution::new(phi, radius)?;
    let mut r = Report::new();
    r.line(format!("r={radius}: {} block letters", b.blocks().len()));
    let text = b.substitution().to_text();
    r.line(text.trim_end().to_owned());
    r.set("r", radius).set("block_letters", b.substitution().alphabet().tokens().to_vec()).set("substitution", text);
    if verify {
        match verify_block_laws(phi, radius, samples, max_len) {
            Ok(rep) => {
                r.line(format!(
                    "OK: {} commutation checks, languages equal up to length {}",
                    rep.commutations_checked, rep.language_lengths_checked
                ));
                r.line(format!("primitive: {} -> {}", yes_no(rep.primitive), yes_no(rep.block_primitive)));
                let cl = |c: Option<usize>| c.map_or("no".to_owned(), |k| k.to_string());
                r.line(format!("constant length: {} -> {}", cl(rep.constant_length), cl(rep.block_constant_length)));
                r.set("verified", true);
            }
            Err(symdyn::Error::Invariant(m)) => {
                r.line(format!("FAIL: {m}"));
                r.set("verified", false).set("counterexample", m);
                r.fail();
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(r)
}

fn load_code(phi: &Substitution, file: &SubstitutionFile, code: Option<&Path>) -> Result<SlidingBlockCode, Failure> {
    match code {
        Some(p) => SlidingBlockCode::parse(phi, &read(p)?).map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))),
        None => {
            let c = file
                .coding
                .as_ref()
                .ok_or_else(|| Failure::Validation("no --code file and the substitution file has no coding".into()))?;
            Ok(SlidingBlockCode::from_coding(phi, c)?)
        }
    }
}

pub struct FactorOptions {
    pub radius: i64,
    pub max_windows: usize,
    pub show: usize,
    pub certify: bool,
    pub depth: usize,
}

pub fn factor_push(path: &Path, code: Option<&Path>, seed: &str, opts: &FactorOptions) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let code = load_code(phi, &file, code)?;
    let q = Qfp::parse(phi, seed)?;
    let pushed = push_qfp(phi, &code, &q)?;
    let radius = opts.radius;
    let image: Word = (-radius..=radius).map(|n| pushed.automaton.eval(n)).collect();
    let n = code.radius() as i64;
    let direct = code.apply_window(&q.materialize(phi, -radius - n, radius + n)?)?;
    if direct.letters() != image.as_slice() {
        return Err(Failure::Invariant("pushed automaton disagrees with the local rule".into()));
    }
    let target = code.target();
    let block_alpha = code.block().substitution().alphabet();
    let mut r = Report::new();
    r.line(format!("lifted: {}", pushed.lifted.to_text(block_alpha)));
    r.line(format!("kernel size: {}", pushed.automaton.kernel_size()));
    r.line(format!("image: {}", Window::new(-radius, image.clone()).render(target)));
    r.set("lifted", pushed.lifted.to_text(block_alpha))
        .set("kernel_size", pushed.automaton.kernel_size())
        .set("image", window_json(target, &Window::new(-radius, image)));
    if opts.certify {
        let cert = certify_fiber_qfp(phi, &code, &q, radius, opts.depth, opts.max_windows)?;
        r.line(format!("fiber branches: {}", cert.branches.len()));
        let mut js = Vec::new();
        for b in &cert.branches {
            let kind = match &b.detection {
                Detection::Found { point, relation, .. } => format!("found {} | {relation}", point.to_text(phi.alphabet())),
                Detection::Ambiguous { level, .. } => format!("ambiguous at level {level}"),
                Detection::NoRepetition { depth } => format!("no repetition up to depth {depth}"),
                Detection::Exhausted { level } => format!("exhausted at level {level}"),
            };
            js.push(json!({ "window": window_json(phi.alphabet(), &b.window), "result": kind }));
            r.line(format!("  {kind}"));
        }
        r.set("branches", js).set("all_found", cert.all_found());
        if !cert.exact {
            r.warn("preimage windows longer than the language check length were checked only on their factors");
        }
        if cert.truncated {
            r.warn(format!("fiber search stopped at {} windows", opts.max_windows));
        }
    }
    Ok(r)
}

pub fn factor_fiber(path: &Path, code: Option<&Path>, window: &str, opts: &FactorOptions) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let code = load_code(phi, &file, code)?;
    let target = Window::parse(code.target(), window)?;
    let fw = fiber_windows(phi, &code, &target, opts.max_windows)?;
    let stab = fiber_stabilization_length(phi, &code);
    let alpha = phi.alphabet();
    let mut r = Report::new();
    r.line(format!("preimage windows: {}", fw.windows.len()));
    r.line(format!("stabilization length: {stab}"));
    if target.len() < stab {
        r.warn(format!("target shorter than the stabilization length {stab}; counts may still change"));
    }
    if !fw.exact {
        r.warn("windows were checked against the language only on bounded-length factors");
    }
    if fw.truncated {
        r.warn(format!("search stopped at {} windows", opts.max_windows));
    }
    for w in fw.windows.iter().take(opts.show) {
        r.line(format!("  {}", w.render(alpha)));
    }
    if fw.windows.len() > opts.show {
        r.line(format!("  ... {} more", fw.windows.len() - opts.show));
    }
    let ws: Vec<Value> = fw.windows.iter().map(|w| window_json(alpha, w)).collect();
    r.set("count", fw.windows.len())
        .set("windows", ws)
        .set("exact", fw.exact)
        .set("truncated", fw.truncated)
        .set("stabilization_length", stab);
    Ok(r)
}

pub fn onesided_show(path: &Path, seed: &str, start: i64, len: usize) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let o = OneSidedQfp::new(Qfp::parse(phi, seed)?, start);
    let rel = o.relation(phi)?;
    let ok = o.verify(phi, len)?;
    let prefix = o.prefix(phi, len)?;
    let mut r = Report::new();
    r.line(format!("start={start} {}", phi.alphabet().render(&prefix)));
    r.line(format!("relation: {rel} ({})", if ok { "holds" } else { "fails" }));
    if !ok {
        r.fail();
    }
    r.set("start", start)
        .set("prefix", phi.alphabet().render(&prefix))
        .set("relation", rel.to_string())
        .set("verified", ok);
    Ok(r)
}

pub fn onesided_prolong(path: &Path, period: u32, offset: i64, prefix: &str) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let prefix = phi.alphabet().parse_word(prefix)?;
    let o = prolong_two_sided(phi, period, offset, &prefix)?;
    let alpha = phi.alphabet();
    let left = o.parent.materialize(phi, -(prefix.len() as i64), -1)?;
    let mut r = Report::new();
    r.line(format!("parent: {}", o.parent.to_text(alpha)));
    r.line(format!("in subshift: {}", yes_no(o.parent.seed.in_system)));
    r.line(format!("left half: {}", left.render(alpha)));
    r.set("parent", o.parent.to_text(alpha))
        .set("start", o.start)
        .set("in_system", o.parent.seed.in_system)
        .set("left", window_json(alpha, &left));
    Ok(r)
}

pub fn onesided_desub_cmd(path: &Path, window: &str) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let alpha = phi.alphabet();
    let (start, x) = parse_onesided_window(alpha, window)?;
    let steps = onesided_desub(phi, &x);
    let mut r = Report::new();
    r.line(format!("{} one-sided desubstitutions of start={start}", steps.len()));
    let mut js = Vec::new();
    for s in &steps {
        r.line(format!("  c={} pred={}", s.c, alpha.render(s.pred.letters())));
        js.push(json!({ "c": s.c, "pred": alpha.render(s.pred.letters()) }));
    }
    r.set("start", start).set("steps", js);
    Ok(r)
}

pub fn onesided_count(path: &Path, window: &str, power: u32) -> CmdResult {
    let file = load(path, false)?;
    let phi = &file.substitution;
    let (_, y) = parse_onesided_window(phi.alphabet(), window)?;
    let pm = phi.power(power);
    let words: Vec<Word> = phi.letters().map(|a| pm.image(a).to_vec()).collect::<BTreeSet<_>>().into_iter().collect();
    let count = interpretation_count(&y, &words)?;
    let mut r = Report::new();
    r.line(format!("W-interpretations: {} found, largest disjoint family {}, |W| = {}", count.total, count.count, words.len()));
    if let Some(p) = count.period {
        r.warn(format!("window has period {p}; the |W| bound applies to nonperiodic sequences only"));
    } else if count.count > words.len() {
        r.line("FAIL: disjoint family exceeds |W|");
        r.fail();
    }
    r.set("count", count.count).set("total", count.total).set("w_size", words.len()).set("period", count.period);
    Ok(r)
}

pub fn paper_examples(only: Option<&str>) -> CmdResult {
    let reports = catalog::run_paper_examples(only)?;
    let mut r = Report::new();
    let mut js = Vec::new();
    for ex in &reports {
        r.line(format!("{} {}", if ex.passed() { "PASS" } else { "FAIL" }, ex.name));
        let mut checks = Vec::new();
        for c in &ex.checks {
            r.line(format!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.anchor, c.detail));
            checks.push(json!({ "anchor": c.anchor, "passed": c.passed, "detail": c.detail }));
        }
        js.push(json!({ "name": ex.name, "passed": ex.passed(), "checks": checks }));
        if !ex.passed() {
            r.fail();
        }
    }
    r.set("examples", js);
    Ok(r)
}
