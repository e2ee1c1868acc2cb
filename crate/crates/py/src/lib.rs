//! Python bindings: substitutions, quasi-fixed points, kernel automata and k-adic rationals.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use symdyn::analysis;
use symdyn::blocks::{verify_block_laws, BlockSubstitution};
use symdyn::catalog;
use symdyn::desub::desub_digits;
use symdyn::format::load_substitution;
use symdyn::kernel::build_kernel_automaton;
use symdyn::language;
use symdyn::quasifix::{self, enumerate_seeds, minimal_period};
use symdyn::{kappa, KAdicRational};

create_exception!(symdyn, SymdynError, PyValueError, "Invalid input or a failed check.");
create_exception!(symdyn, InvariantError, SymdynError, "An internal consistency check failed.");

fn err(e: symdyn::Error) -> PyErr {
    match e {
        symdyn::Error::Invariant(_) => InvariantError::new_err(e.to_string()),
        _ => SymdynError::new_err(e.to_string()),
    }
}

/// A substitution on a finite alphabet, with an optional coding.
#[pyclass(name = "Substitution", module = "symdyn", frozen)]
struct PySubstitution {
    phi: symdyn::Substitution,
    coding: Option<symdyn::Coding>,
}

#[pymethods]
impl PySubstitution {
    /// Parse the text format (`alphabet:` line, `map a -> ...` rules, optional coding block).
    #[new]
    #[pyo3(signature = (text, allow_nongrowing = false))]
    fn new(text: &str, allow_nongrowing: bool) -> PyResult<Self> {
        let f = load_substitution(text, allow_nongrowing).map_err(err)?;
        Ok(Self { phi: f.substitution, coding: f.coding })
    }

    /// Build from `{letter: image}` with single-character letters.
    #[staticmethod]
    fn from_rules(rules: Vec<(String, String)>) -> PyResult<Self> {
        let pairs: Vec<(&str, &str)> = rules.iter().map(|(a, w)| (a.as_str(), w.as_str())).collect();
        let phi = symdyn::Substitution::from_rules(&pairs).map_err(err)?;
        Ok(Self { phi, coding: None })
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.phi.alphabet().tokens().to_vec()
    }

    #[getter]
    fn constant_length(&self) -> Option<usize> {
        self.phi.constant_length()
    }

    #[getter]
    fn has_coding(&self) -> bool {
        self.coding.is_some()
    }

    fn image(&self, letter: &str) -> PyResult<String> {
        let a = self.letter(letter)?;
        Ok(self.phi.alphabet().render(self.phi.image(a)))
    }

    /// φ^n applied to a word.
    #[pyo3(signature = (word, n = 1))]
    fn apply(&self, word: &str, n: u32) -> PyResult<String> {
        let w = self.phi.alphabet().parse_word(word).map_err(err)?;
        Ok(self.phi.alphabet().render(&self.phi.power(n).apply(&w)))
    }

    fn is_growing(&self) -> bool {
        analysis::analyze(&self.phi).growing
    }

    fn is_primitive(&self) -> bool {
        analysis::analyze(&self.phi).primitive
    }

    /// Letters occurring in points of the subshift.
    fn letters(&self) -> Vec<String> {
        language::letters(&self.phi).into_iter().map(|a| self.phi.alphabet().token(a).to_owned()).collect()
    }

    /// Two-letter words of the subshift.
    fn pairs(&self) -> Vec<String> {
        language::pair_language(&self.phi).iter().map(|&(a, b)| self.phi.alphabet().render(&[a, b])).collect()
    }

    /// Words of the subshift of length 1..=max_len, shortest first.
    fn language(&self, max_len: usize) -> Vec<String> {
        language::language(&self.phi, max_len).iter().map(|w| self.phi.alphabet().render(w)).collect()
    }

    fn contains(&self, word: &str) -> PyResult<bool> {
        let w = self.phi.alphabet().parse_word(word).map_err(err)?;
        Ok(language::contains(&self.phi, &w))
    }

    /// Quasi-fixed points of period m, one per seed (or per equality class with `dedup`).
    #[pyo3(signature = (m, dedup = false))]
    fn qfps(slf: &Bound<'_, Self>, m: u32, dedup: bool) -> PyResult<Vec<PyQfp>> {
        let phi = &slf.get().phi;
        let mut points: Vec<quasifix::Qfp> =
            enumerate_seeds(phi, m).map_err(err)?.into_iter().map(quasifix::Qfp::new).collect();
        if dedup {
            points = quasifix::dedup(phi, &points).map_err(err)?;
        }
        Ok(points.into_iter().map(|q| PyQfp { sub: slf.clone().unbind(), q }).collect())
    }

    /// A point from its text form, e.g. `interior a=0 i=5 m=4`.
    fn qfp(slf: &Bound<'_, Self>, seed: &str) -> PyResult<PyQfp> {
        let q = quasifix::Qfp::parse(&slf.get().phi, seed).map_err(err)?;
        Ok(PyQfp { sub: slf.clone().unbind(), q })
    }

    /// The r-block substitution.
    fn block(&self, r: usize) -> PyResult<PySubstitution> {
        let b = BlockSubstitution::new(&self.phi, r).map_err(err)?;
        Ok(PySubstitution { phi: b.substitution().clone(), coding: None })
    }

    /// Check the block laws by sampling; raises `InvariantError` with a counterexample.
    #[pyo3(signature = (r, samples = 100, max_len = 10))]
    fn verify_block_laws(&self, r: usize, samples: usize, max_len: usize) -> PyResult<()> {
        verify_block_laws(&self.phi, r, samples, max_len).map(|_| ()).map_err(err)
    }

    fn to_text(&self) -> String {
        self.phi.to_text()
    }

    fn __repr__(&self) -> String {
        let rules: Vec<String> = self
            .phi
            .letters()
            .map(|a| format!("{}->{}", self.phi.alphabet().token(a), self.phi.alphabet().render(self.phi.image(a))))
            .collect();
        format!("Substitution({})", rules.join(", "))
    }
}

impl PySubstitution {
    fn letter(&self, token: &str) -> PyResult<symdyn::Letter> {
        self.phi.alphabet().letter(token).ok_or_else(|| SymdynError::new_err(format!("unknown letter `{token}`")))
    }
}

/// A two-sided point z with T^c(φ^m(z)) = z.
#[pyclass(name = "Qfp", module = "symdyn", frozen)]
struct PyQfp {
    sub: Py<PySubstitution>,
    q: quasifix::Qfp,
}

#[pymethods]
impl PyQfp {
    /// `(m, c)` of the relation T^c(φ^m(z)) = z.
    fn relation(&self) -> PyResult<(u32, i64)> {
        let r = self.q.relation(&self.sub.get().phi).map_err(err)?;
        Ok((r.period, r.offset))
    }

    fn relation_text(&self) -> PyResult<String> {
        Ok(self.q.relation(&self.sub.get().phi).map_err(err)?.to_string())
    }

    #[getter]
    fn in_subshift(&self) -> bool {
        self.q.seed.in_system
    }

    /// Letters z[lo..=hi].
    fn window(&self, lo: i64, hi: i64) -> PyResult<String> {
        let phi = &self.sub.get().phi;
        Ok(phi.alphabet().render(self.q.materialize(phi, lo, hi).map_err(err)?.letters()))
    }

    fn verify(&self, radius: i64) -> PyResult<bool> {
        self.q.verify(&self.sub.get().phi, radius).map_err(err)
    }

    fn minimal_period(&self) -> PyResult<u32> {
        minimal_period(&self.sub.get().phi, &self.q).map_err(err)
    }

    /// The k-adic address, as `(p, q, k)`.
    fn address(&self) -> PyResult<(String, String, u32)> {
        let k = kappa(&self.sub.get().phi, &self.q).map_err(err)?;
        Ok((k.numer().to_string(), k.denom().to_string(), k.base()))
    }

    /// Desubstitution digits as `(preperiod, cycle)`, least significant first.
    fn digits(&self) -> PyResult<(Vec<u32>, Vec<u32>)> {
        let d = desub_digits(&self.sub.get().phi, &self.q).map_err(err)?;
        Ok((d.expansion.preperiod().to_vec(), d.expansion.cycle().to_vec()))
    }

    /// Minimized kernel automaton, optionally composed with the file's coding.
    #[pyo3(signature = (coding = false))]
    fn kernel(&self, coding: bool) -> PyResult<PyKernel> {
        let s = self.sub.get();
        let tau = match (coding, &s.coding) {
            (false, _) => None,
            (true, Some(c)) => Some(c),
            (true, None) => return Err(SymdynError::new_err("substitution has no coding")),
        };
        let a = build_kernel_automaton(&s.phi, &self.q, tau).map_err(err)?;
        Ok(PyKernel { raw_states: a.len(), automaton: a.minimize() })
    }

    fn __str__(&self) -> String {
        self.q.to_text(self.sub.get().phi.alphabet())
    }

    fn __repr__(&self) -> String {
        format!("Qfp({})", self.__str__())
    }
}

/// A base-k automaton reading the digits of n ∈ ℤ and returning z_n.
#[pyclass(name = "KernelAutomaton", module = "symdyn", frozen)]
struct PyKernel {
    automaton: symdyn::kernel::KernelAutomaton,
    raw_states: usize,
}

#[pymethods]
impl PyKernel {
    #[getter]
    fn base(&self) -> u32 {
        self.automaton.base()
    }

    #[getter]
    fn size(&self) -> usize {
        self.automaton.kernel_size()
    }

    /// States before minimization.
    #[getter]
    fn raw_states(&self) -> usize {
        self.raw_states
    }

    fn eval(&self, n: i64) -> String {
        self.automaton.eval_token(n).to_owned()
    }

    fn to_text(&self) -> String {
        self.automaton.to_text()
    }

    fn to_dot(&self) -> String {
        self.automaton.to_dot()
    }
}

/// `(fraction, digits)` for the address c/(1 - k^m).
#[pyfunction]
fn kadic_relation(c: i64, m: u32, k: u32) -> PyResult<(String, String)> {
    let v = KAdicRational::from_relation(c, m, k).map_err(err)?;
    Ok((v.fraction(), v.expansion().to_string()))
}

/// `(fraction, digits)` for p/q in ℤ_k; q must be coprime to k.
#[pyfunction]
fn kadic_expand(p: i64, q: i64, k: u32) -> PyResult<(String, String)> {
    let v = KAdicRational::new(p, q, k).map_err(err)?;
    Ok((v.fraction(), v.expansion().to_string()))
}

/// Run the worked examples; returns `(name, passed)` pairs.
#[pyfunction]
#[pyo3(signature = (only = None))]
fn run_examples(only: Option<&str>) -> PyResult<Vec<(String, bool)>> {
    let reports = catalog::run_paper_examples(only).map_err(err)?;
    Ok(reports.iter().map(|r| (r.name.to_string(), r.passed())).collect())
}

#[pymodule(name = "symdyn")]
fn symdyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySubstitution>()?;
    m.add_class::<PyQfp>()?;
    m.add_class::<PyKernel>()?;
    m.add_function(wrap_pyfunction!(kadic_relation, m)?)?;
    m.add_function(wrap_pyfunction!(kadic_expand, m)?)?;
    m.add_function(wrap_pyfunction!(run_examples, m)?)?;
    m.add("SymdynError", m.py().get_type::<SymdynError>())?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    Ok(())
}
