//! Column maps and kernel automata of quasi-fixed points.
//!
//! A state `(f, j, s)` stands for the two-sided sequence `n ↦ f(z^j_{n+s})`, where `z^j` is
//! the `j`-th point of the digit chain. Reading the digit `d = n mod k` moves to the state
//! describing `n ↦ y(kn + d)`, so every position is reached by its floor-division digit path,
//! which ends in the fixpoint `0` (digit 0) or `-1` (digit `k-1`).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::desub::digit_chain;
use crate::error::{Error, Result};
use crate::morphism::{Alphabet, Coding, Letter, LetterMap, Substitution};
use crate::quasifix::Qfp;

pub type ColumnMap = LetterMap;

/// The columns `Ψ_i` of a constant-length substitution: `Ψ_i(a)` is the `i`-th letter of `φ(a)`.
pub fn columns(phi: &Substitution) -> Result<Vec<ColumnMap>> {
    let k = phi.require_constant_length()?;
    Ok((0..k).map(|i| phi.column(i)).collect())
}

fn step_family(cols: &[ColumnMap], family: &BTreeSet<ColumnMap>) -> BTreeSet<ColumnMap> {
    family.iter().flat_map(|f| cols.iter().map(move |c| c.compose(f))).collect()
}

/// All compositions of `m` columns, deduplicated.
pub fn column_maps(phi: &Substitution, m: u32) -> Result<BTreeSet<ColumnMap>> {
    let cols = columns(phi)?;
    let mut family = BTreeSet::from([LetterMap::identity(phi.size())]);
    for _ in 0..m {
        family = step_family(&cols, &family);
    }
    Ok(family)
}

/// Least `n ≥ 1` such that the compositions of `n` columns and of `2n` columns coincide,
/// i.e. `φ^n` and `φ^{2n}` have the same set of columns.
pub fn column_constant_power(phi: &Substitution) -> Result<u32> {
    let cols = columns(phi)?;
    let mut families = vec![BTreeSet::from([LetterMap::identity(phi.size())])];
    let mut n = 1usize;
    loop {
        while families.len() <= 2 * n {
            let next = step_family(&cols, families.last().expect("non-empty"));
            families.push(next);
        }
        if families[n] == families[2 * n] {
            return u32::try_from(n).map_err(|_| Error::Overflow("column power"));
        }
        n += 1;
    }
}

/// Post-hoc check of [`column_constant_power`]: `φ^n` and `φ^{2n}` have equal column sets.
pub fn check_column_constant(phi: &Substitution, n: u32) -> Result<bool> {
    let p = phi.power(n);
    Ok(column_maps(&p, 1)? == column_maps(&p, 2)?)
}

/// One state of a kernel automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelState {
    /// Letters at positions `-1` and `0` of the sequence this state stands for.
    pub obs: (Letter, Letter),
    pub next: Vec<usize>,
}

/// A deterministic automaton with output reading base-`k` digits, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelAutomaton {
    base: u32,
    root: usize,
    states: Vec<KernelState>,
    alphabet: Alphabet,
}

impl KernelAutomaton {
    pub fn new(base: u32, root: usize, states: Vec<KernelState>, alphabet: Alphabet) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument("automaton base must be at least 2".into()));
        }
        if root >= states.len() {
            return Err(Error::InvalidArgument(format!("root {root} is not a state")));
        }
        for (i, s) in states.iter().enumerate() {
            if s.next.len() != base as usize || s.next.iter().any(|&t| t >= states.len()) {
                return Err(Error::InvalidArgument(format!("state {i} has bad transitions")));
            }
            if s.obs.0.idx() >= alphabet.len() || s.obs.1.idx() >= alphabet.len() {
                return Err(Error::InvalidArgument(format!("state {i} has an unknown observation")));
            }
        }
        Ok(KernelAutomaton { base, root, states, alphabet })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn states(&self) -> &[KernelState] {
        &self.states
    }

    /// Number of states, before any minimization.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Output alphabet of the observations.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Letter at position `n`.
    pub fn eval(&self, n: i64) -> Letter {
        let k = self.base as i64;
        let (mut state, mut n) = (self.root, n);
        loop {
            match n {
                0 => return self.states[state].obs.1,
                -1 => return self.states[state].obs.0,
                _ => {
                    state = self.states[state].next[n.rem_euclid(k) as usize];
                    n = n.div_euclid(k);
                }
            }
        }
    }

    pub fn eval_token(&self, n: i64) -> &str {
        self.alphabet.token(self.eval(n))
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = vec![self.root];
        seen[self.root] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.states[order[i]].next {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Moore minimization of the reachable part; states are renumbered in breadth-first order
    /// from the root, so equal sequences give identical automata.
    pub fn minimize(&self) -> KernelAutomaton {
        let order = self.reachable();
        let mut class: HashMap<usize, usize> = HashMap::new();
        let mut keys: BTreeMap<(Letter, Letter), usize> = BTreeMap::new();
        for &s in &order {
            let n = keys.len();
            let c = *keys.entry(self.states[s].obs).or_insert(n);
            class.insert(s, c);
        }
        let mut count = keys.len();
        loop {
            let mut sig: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_class = HashMap::new();
            for &s in &order {
                let key = (class[&s], self.states[s].next.iter().map(|t| class[t]).collect::<Vec<_>>());
                let n = sig.len();
                next_class.insert(s, *sig.entry(key).or_insert(n));
            }
            class = next_class;
            if sig.len() == count {
                break;
            }
            count = sig.len();
        }
        // Renumber by BFS over classes.
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for &s in &order {
            rep.entry(class[&s]).or_insert(s);
        }
        let mut number: HashMap<usize, usize> = HashMap::from([(class[&self.root], 0)]);
        let mut queue = VecDeque::from([class[&self.root]]);
        let mut reps = Vec::new();
        while let Some(c) = queue.pop_front() {
            let s = rep[&c];
            reps.push(s);
            for t in &self.states[s].next {
                let tc = class[t];
                if !number.contains_key(&tc) {
                    number.insert(tc, number.len());
                    queue.push_back(tc);
                }
            }
        }
        let states = reps
            .iter()
            .map(|&s| KernelState {
                obs: self.states[s].obs,
                next: self.states[s].next.iter().map(|t| number[&class[t]]).collect(),
            })
            .collect();
        KernelAutomaton { base: self.base, root: 0, states, alphabet: self.alphabet.clone() }
    }

    /// Number of distinct sequences in the two-sided kernel.
    pub fn kernel_size(&self) -> usize {
        self.minimize().states.len()
    }

    /// Same sequence with every observation passed through `tau`.
    pub fn map_output(&self, tau: &Coding) -> Result<KernelAutomaton> {
        if tau.source() != &self.alphabet {
            return Err(Error::AlphabetMismatch("coding source differs from automaton output".into()));
        }
        let states = self
            .states
            .iter()
            .map(|s| KernelState { obs: (tau.apply_letter(s.obs.0), tau.apply_letter(s.obs.1)), next: s.next.clone() })
            .collect();
        Ok(KernelAutomaton { base: self.base, root: self.root, states, alphabet: tau.target().clone() })
    }

    /// Text form: a `k=<k> root=<id>` header, then `state` and `edge` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("k={} root={}\n", self.base, self.root);
        for (i, s) in self.states.iter().enumerate() {
            let _ = writeln!(out, "state {i} obs={},{}", self.alphabet.token(s.obs.0), self.alphabet.token(s.obs.1));
        }
        for (i, s) in self.states.iter().enumerate() {
            for (d, t) in s.next.iter().enumerate() {
                let _ = writeln!(out, "edge {i} {d} {t}");
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = String::from("digraph kernel {\n  rankdir=LR;\n  start [shape=point];\n");
        let _ = writeln!(out, "  start -> s{};", self.root);
        for (i, s) in self.states.iter().enumerate() {
            let _ = writeln!(
                out,
                "  s{i} [shape=box, label=\"{i}: {},{}\"];",
                esc(self.alphabet.token(s.obs.0)),
                esc(self.alphabet.token(s.obs.1))
            );
        }
        for (i, s) in self.states.iter().enumerate() {
            let mut by_target: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (d, &t) in s.next.iter().enumerate() {
                by_target.entry(t).or_default().push(d);
            }
            for (t, ds) in by_target {
                let label: Vec<String> = ds.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "  s{i} -> s{t} [label=\"{}\"];", label.join(","));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Parses the text form; the output alphabet is built from the tokens in order of appearance.
    pub fn from_text(text: &str) -> Result<KernelAutomaton> {
        let syntax = |line: usize, message: &str| Error::Syntax { line, message: message.to_owned() };
        let mut header = None;
        let mut obs: BTreeMap<usize, (String, String)> = BTreeMap::new();
        let mut edges: Vec<(usize, usize, usize, usize)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| syntax(line_no, "expected a non-negative integer"));
            match parts.as_slice() {
                [k, root] if k.starts_with("k=") && root.starts_with("root=") => {
                    header = Some((num(&k[2..])?, num(&root[5..])?));
                }
                ["state", id, o] => {
                    let pair = o.strip_prefix("obs=").ok_or_else(|| syntax(line_no, "expected obs=<tok>,<tok>"))?;
                    let (a, b) = pair.split_once(',').ok_or_else(|| syntax(line_no, "expected obs=<tok>,<tok>"))?;
                    if obs.insert(num(id)?, (a.to_owned(), b.to_owned())).is_some() {
                        return Err(syntax(line_no, "duplicate state"));
                    }
                }
                ["edge", from, d, to] => edges.push((line_no, num(from)?, num(d)?, num(to)?)),
                _ => return Err(syntax(line_no, "unrecognised line")),
            }
        }
        let (k, root) = header.ok_or_else(|| syntax(1, "missing `k=<k> root=<id>` header"))?;
        let n = obs.len();
        if obs.keys().enumerate().any(|(i, &id)| i != id) {
            return Err(syntax(0, "state ids must be 0..n-1"));
        }
        let mut tokens: Vec<String> = Vec::new();
        for (a, b) in obs.values() {
            for t in [a, b] {
                if !tokens.contains(t) {
                    tokens.push(t.clone());
                }
            }
        }
        let alphabet = Alphabet::new(tokens)?;
        let mut next = vec![vec![usize::MAX; k]; n];
        for (line, from, d, to) in edges {
            if from >= n || d >= k || to >= n {
                return Err(syntax(line, "edge out of range"));
            }
            if next[from][d] != usize::MAX {
                return Err(syntax(line, "duplicate edge"));
            }
            next[from][d] = to;
        }
        if next.iter().flatten().any(|&t| t == usize::MAX) {
            return Err(syntax(0, "missing edge"));
        }
        let states = obs
            .into_values()
            .zip(next)
            .map(|((a, b), next)| KernelState {
                obs: (alphabet.letter(&a).expect("collected"), alphabet.letter(&b).expect("collected")),
                next,
            })
            .collect();
        KernelAutomaton::new(u32::try_from(k).map_err(|_| Error::Overflow("base"))?, root, states, alphabet)
    }
}

/// Exact kernel automaton of `q`, optionally composed with an output coding.
pub fn build_kernel_automaton(phi: &Substitution, q: &Qfp, coding: Option<&Coding>) -> Result<KernelAutomaton> {
    let k = phi.require_constant_length()?;
    if let Some(tau) = coding {
        if tau.source() != phi.alphabet() {
            return Err(Error::AlphabetMismatch("coding source differs from the substitution alphabet".into()));
        }
    }
    let chain = digit_chain(phi, q)?;
    let cols = columns(phi)?;
    let windows = chain.elements.iter().map(|e| e.materialize(phi, -1, 1)).collect::<Result<Vec<_>>>()?;

    let root = (LetterMap::identity(phi.size()), 0usize, 0usize);
    let mut index: HashMap<(LetterMap, usize, usize), usize> = HashMap::from([(root.clone(), 0)]);
    let mut keys = vec![root];
    let mut states: Vec<KernelState> = Vec::new();
    while states.len() < keys.len() {
        let (f, j, s) = keys[states.len()].clone();
        let w = &windows[j];
        let at = |p: i64| {
            let a = f.apply(w.get(p).expect("radius-one window"));
            coding.map_or(a, |t| t.apply_letter(a))
        };
        let obs = (at(s as i64 - 1), at(s as i64));
        let cj = chain.digits[j] as usize;
        let jn = chain.next_index(j);
        let mut next = Vec::with_capacity(k);
        for d in 0..k {
            let e = d + s + cj;
            let child = if e < k { (f.compose(&cols[e]), jn, 0) } else { (f.compose(&cols[e - k]), jn, 1) };
            let id = match index.get(&child) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    index.insert(child.clone(), id);
                    keys.push(child);
                    id
                }
            };
            next.push(id);
        }
        states.push(KernelState { obs, next });
    }
    let alphabet = coding.map_or_else(|| phi.alphabet().clone(), |t| t.target().clone());
    KernelAutomaton::new(k as u32, 0, states, alphabet)
}

/// Whether two automata evaluate to the same sequence, by exploring the product automaton.
/// Observations are compared as tokens, so the automata may carry different alphabets.
/// Automata over different bases are reported unequal.
pub fn equal_sequences(a: &KernelAutomaton, b: &KernelAutomaton) -> bool {
    if a.base != b.base {
        return false;
    }
    let same = |x: Letter, y: Letter| a.alphabet.token(x) == b.alphabet.token(y);
    let mut seen = BTreeSet::from([(a.root, b.root)]);
    let mut queue = VecDeque::from([(a.root, b.root)]);
    while let Some((p, q)) = queue.pop_front() {
        let (sp, sq) = (&a.states[p], &b.states[q]);
        if !same(sp.obs.0, sq.obs.0) || !same(sp.obs.1, sq.obs.1) {
            return false;
        }
        for (&x, &y) in sp.next.iter().zip(&sq.next) {
            if seen.insert((x, y)) {
                queue.push_back((x, y));
            }
        }
    }
    true
}
