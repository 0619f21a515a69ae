//! Python bindings. Words are passed as digit strings or `Word` objects;
//! exact exponents come back as `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use powerfree_core::codewalk::{self, CodewalkCheck, JumpVertex};
use powerfree_core::complexity::{self as cplx, ClosedForm};
use powerfree_core::krieger::{self, ExponentValue};
use powerfree_core::repetition::{self, PowerCheck, Run};
use powerfree_core::search::{self, ComplexityCap, Constraint, MaxLength};
use powerfree_core::{GeneratorSpec, Rational};

fn err(e: powerfree_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn exponent_value<'py>(py: Python<'py>, v: &ExponentValue) -> PyResult<Bound<'py, PyAny>> {
    match v {
        ExponentValue::Exact(r) => fraction(py, r),
        ExponentValue::Limit(x) => Ok(x.into_pyobject(py)?.into_any()),
    }
}

fn run_tuple(r: &Run) -> (usize, usize, usize) {
    (r.start, r.length, r.period)
}

fn spec(name: &str) -> PyResult<GeneratorSpec> {
    name.parse().map_err(err)
}

fn parse_bound(s: &str) -> PyResult<powerfree_core::PowerBound> {
    s.parse().map_err(err)
}

/// A finite word over `{0, …, k−1}`.
#[pyclass(name = "Word", module = "powerfree", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyWord(powerfree_core::Word);

#[pymethods]
impl PyWord {
    #[new]
    #[pyo3(signature = (digits, alphabet_size=None))]
    fn new(digits: &str, alphabet_size: Option<u8>) -> PyResult<Self> {
        let w = match alphabet_size {
            Some(k) => powerfree_core::Word::parse_over(digits, k),
            None => digits.parse(),
        };
        w.map(PyWord).map_err(err)
    }

    /// Length-`n` prefix of a named word.
    #[staticmethod]
    fn generate(name: &str, n: usize) -> PyResult<Self> {
        Ok(PyWord(spec(name)?.generate(n)))
    }

    #[getter]
    fn alphabet_size(&self) -> u8 {
        self.0.alphabet_size()
    }

    #[getter]
    fn letters(&self) -> Vec<u8> {
        self.0.letters().to_vec()
    }

    fn prefix(&self, n: usize) -> Self {
        PyWord(self.0.prefix(n))
    }

    fn reversed(&self) -> Self {
        PyWord(self.0.reversed())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}', alphabet_size={})", self.0, self.0.alphabet_size())
    }

    fn __contains__(&self, factor: WordArg) -> PyResult<bool> {
        Ok(self.0.contains_factor(factor.word()?.letters()))
    }
}

#[derive(FromPyObject)]
enum WordArg {
    Word(PyWord),
    Digits(String),
}

impl WordArg {
    fn word(self) -> PyResult<powerfree_core::Word> {
        match self {
            WordArg::Word(w) => Ok(w.0),
            WordArg::Digits(s) => s.parse().map_err(err),
        }
    }
}

/// `α` or `α⁺` power bound, written `"7/3"` or `"7/3+"`.
#[pyclass(name = "PowerBound", module = "powerfree", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPowerBound(powerfree_core::PowerBound);

#[pymethods]
impl PyPowerBound {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_bound(text).map(PyPowerBound)
    }

    #[getter]
    fn value<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.value())
    }

    #[getter]
    fn strict(&self) -> bool {
        self.0.is_strict()
    }

    /// True when a word of this length and period is forbidden.
    fn forbids(&self, length: usize, period: usize) -> bool {
        self.0.forbids_ratio(length, period)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PowerBound('{}')", self.0)
    }
}

/// Codewalk of a ternary square-free word, written `<h:www:t>` with
/// unmarked ends omitted.
#[pyclass(name = "Codewalk", module = "powerfree", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyCodewalk(codewalk::Codewalk);

#[pymethods]
impl PyCodewalk {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyCodewalk).map_err(err)
    }

    #[staticmethod]
    fn encode(word: WordArg) -> PyResult<Self> {
        codewalk::encode(&word.word()?).map(PyCodewalk).map_err(err)
    }

    #[getter]
    fn weights(&self) -> Vec<u8> {
        self.0.weights().to_vec()
    }

    #[getter]
    fn head(&self) -> usize {
        self.0.head_edge_length()
    }

    #[getter]
    fn tail(&self) -> usize {
        self.0.tail_edge_length()
    }

    #[pyo3(signature = (start="010"))]
    fn decode(&self, start: &str) -> PyResult<PyWord> {
        let v: JumpVertex = start.parse().map_err(err)?;
        codewalk::decode(&self.0, v).map(PyWord).map_err(err)
    }

    fn is_closed(&self) -> bool {
        codewalk::is_closed(&self.0)
    }

    /// `None` on a sufficient pass, otherwise `(position, factor, reason)`.
    fn check(&self) -> Option<(usize, String, String)> {
        match codewalk::sf_codewalk_check(&self.0) {
            CodewalkCheck::SufficientPass => None,
            CodewalkCheck::Reject { position, factor, reason } => Some((position, factor, reason)),
        }
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Codewalk('{}')", self.0)
    }
}

/// A series of runs of a morphic word: `G1`, `G2` or `tauG`.
#[pyclass(name = "RunSeries", module = "powerfree", frozen)]
pub struct PyRunSeries(krieger::RunSeries);

#[pymethods]
impl PyRunSeries {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        krieger::named_series(name).map(PyRunSeries).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn seed(&self) -> (usize, usize, usize) {
        run_tuple(&self.0.seed)
    }

    fn exponent<'py>(&self, py: Python<'py>, m: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &krieger::series_exponent(&self.0, m))
    }

    fn exponents<'py>(&self, py: Python<'py>, m_max: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
        krieger::series_exponents(&self.0, m_max).iter().map(|r| fraction(py, r)).collect()
    }

    fn limit(&self) -> PyResult<f64> {
        Ok(krieger::series_limit(&self.0).map_err(err)?.value())
    }

    fn __repr__(&self) -> String {
        format!("RunSeries('{}')", self.0.name)
    }
}

/// Names of the built-in words.
#[pyfunction]
fn registry() -> Vec<&'static str> {
    GeneratorSpec::ALL.iter().map(|g| g.name()).collect()
}

#[pyfunction]
fn generate(name: &str, n: usize) -> PyResult<String> {
    Ok(spec(name)?.generate(n).to_string())
}

/// `None` if `word` avoids the bound, otherwise the witness `(start, length, period)`.
#[pyfunction]
fn check_power_free(word: WordArg, bound: &str) -> PyResult<Option<(usize, usize, usize)>> {
    Ok(match repetition::check_power_free(&word.word()?, &parse_bound(bound)?) {
        PowerCheck::Pass => None,
        PowerCheck::Fail(r) => Some(run_tuple(&r)),
    })
}

#[pyfunction]
fn critical_exponent<'py>(py: Python<'py>, word: WordArg) -> PyResult<(Bound<'py, PyAny>, (usize, usize, usize))> {
    let (e, r) = repetition::critical_exponent(&word.word()?).map_err(err)?;
    Ok((fraction(py, &e)?, run_tuple(&r)))
}

/// Maximal repetitions of exponent at least 2.
#[pyfunction]
fn runs(word: WordArg) -> PyResult<Vec<(usize, usize, usize)>> {
    Ok(repetition::runs(&word.word()?).iter().map(run_tuple).collect())
}

/// `p(0..=n_max)` of a finite word.
#[pyfunction]
fn complexity(word: WordArg, n_max: usize) -> PyResult<Vec<u64>> {
    Ok(cplx::profile(&word.word()?, n_max).map_err(err)?.values)
}

/// `p(0..=n_max)` of a named word and whether the prefix stabilized.
#[pyfunction]
fn stabilized_complexity(name: &str, n_max: usize) -> PyResult<(Vec<u64>, bool)> {
    let p = cplx::stabilized_profile(spec(name)?, n_max);
    Ok((p.values, p.stabilized))
}

/// `D(1..=n_max)` of a named word and whether the prefix stabilized.
#[pyfunction]
fn special_counts(name: &str, n_max: usize) -> PyResult<(Vec<usize>, bool)> {
    Ok(cplx::special_counts(spec(name)?, n_max))
}

/// `p_t`, `p_tprime`, `D_t` or `D_tprime` at `n`.
#[pyfunction]
fn closed_form(name: &str, n: u64) -> PyResult<u64> {
    let f: ClosedForm = name.parse().map_err(err)?;
    Ok(cplx::closed_form(f, n))
}

/// Critical exponent of a named word: a `Fraction` when attained, else a float limit.
#[pyfunction]
#[pyo3(signature = (name, series=Vec::new(), prefix_len=10_000))]
fn morphic_critical_exponent<'py>(
    py: Python<'py>,
    name: &str,
    series: Vec<String>,
    prefix_len: usize,
) -> PyResult<(Bound<'py, PyAny>, bool)> {
    let series = series.iter().map(|s| krieger::named_series(s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let m = krieger::morphic_critical_exponent(spec(name)?, &series, prefix_len).map_err(err)?;
    Ok((exponent_value(py, &m.value)?, m.attained))
}

fn constraint(k: u8, bound: &str, cap: Option<&str>) -> PyResult<Constraint> {
    let mut c = Constraint::new(k, parse_bound(bound)?);
    if let Some(cap) = cap {
        c = c.with_cap(cap.parse::<ComplexityCap>().map_err(err)?);
    }
    Ok(c)
}

/// Admissible word counts for lengths `0..=n_max`, and whether the search finished.
#[pyfunction]
#[pyo3(signature = (k, bound, n_max, cap=None, budget=search::DEFAULT_BUDGET))]
fn census(k: u8, bound: &str, n_max: usize, cap: Option<&str>, budget: u64) -> PyResult<(Vec<u64>, bool)> {
    let c = constraint(k, bound, cap)?;
    let out = py_detach(|| search::dfs_census(&c, n_max, budget));
    Ok((out.census, out.complete))
}

/// Height of the constrained search tree (`None` if open) and its longest words.
#[pyfunction]
#[pyo3(signature = (k, bound, cap=None, limit=200, budget=search::DEFAULT_BUDGET))]
fn longest(k: u8, bound: &str, cap: Option<&str>, limit: usize, budget: u64) -> PyResult<(Option<usize>, Vec<String>)> {
    let c = constraint(k, bound, cap)?;
    let out = py_detach(|| search::longest_with_cap(&c, limit, budget));
    let n = match out.max_length {
        MaxLength::Finite(n) => Some(n),
        MaxLength::Open => None,
    };
    Ok((n, out.maximal_words.iter().map(|w| w.to_string()).collect()))
}

fn py_detach<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    Python::attach(|py| py.detach(f))
}

/// Power-free words, subword complexity and codewalks.
#[pymodule]
pub fn powerfree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_class::<PyPowerBound>()?;
    m.add_class::<PyCodewalk>()?;
    m.add_class::<PyRunSeries>()?;
    m.add_function(wrap_pyfunction!(registry, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(check_power_free, m)?)?;
    m.add_function(wrap_pyfunction!(critical_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(runs, m)?)?;
    m.add_function(wrap_pyfunction!(complexity, m)?)?;
    m.add_function(wrap_pyfunction!(stabilized_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(special_counts, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(morphic_critical_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(longest, m)?)?;
    Ok(())
}
