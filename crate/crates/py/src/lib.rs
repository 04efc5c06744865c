//! Python module `tel`: formulas, lasso words, evaluation, rewriting,
//! translations, encodings and cohort queries.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tel_core::cohort::{self, Bin, IngestOptions, NaiveDate, Positions};
use tel_core::encode::{self as enc, BuchiAutomaton, PcpInstance, DEFAULT_NODE_BUDGET};
use tel_core::rewrite;
use tel_core::syntax::{formula_to_json, parse_formula, parse_ltl, parse_tcl};
use tel_core::translate::{ltl_to_tel, tcl_to_tel};
use tel_core::{Alphabet, Env, EvalConfig, LassoWord, Mode, Truth3};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Witness = Vec<(String, u64)>;

fn truth(t: Truth3) -> Option<bool> {
    t.as_bool()
}

fn config(bound: Option<u64>, assume_complete: bool) -> EvalConfig {
    let cfg = EvalConfig::default().assuming_complete(assume_complete);
    match bound {
        Some(b) => cfg.with_bound(b),
        None => cfg,
    }
}

fn mode(name: Option<&str>) -> PyResult<Option<Mode>> {
    match name {
        None => Ok(None),
        Some("letters") => Ok(Some(Mode::Letters)),
        Some("props") => Ok(Some(Mode::Props)),
        Some(other) => Err(PyValueError::new_err(format!("mode must be 'letters' or 'props', not {other:?}"))),
    }
}

#[pyclass(name = "Formula", module = "tel", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyFormula(tel_core::Formula);

#[pymethods]
impl PyFormula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_formula(text, None).map(PyFormula).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.0.to_string())
    }

    /// The syntax tree as a JSON string.
    fn to_json(&self) -> String {
        formula_to_json(&self.0).to_string()
    }

    fn atoms(&self) -> Vec<String> {
        self.0.atoms().into_iter().collect()
    }

    fn free_vars(&self) -> Vec<String> {
        self.0.free_vars().into_iter().collect()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn simplify(&self) -> Self {
        PyFormula(rewrite::simplify(&self.0))
    }

    fn normalize_shifts(&self) -> Self {
        PyFormula(rewrite::normalize_shifts(&self.0))
    }

    /// Push negations onto atoms and replace `¬a` by the other letters.
    fn negation_free(&self, alphabet: Vec<String>) -> PyResult<Self> {
        let alphabet = Alphabet::letters(alphabet).map_err(value_error)?;
        Ok(PyFormula(rewrite::negation_free(&self.0, &alphabet)))
    }

    #[pyo3(signature = (size_guard = rewrite::DEFAULT_SIZE_GUARD))]
    fn expand(&self, size_guard: usize) -> Self {
        PyFormula(rewrite::expand_constant_modalities(&self.0, size_guard))
    }

    /// `simplify` with the list of rules applied, as `(rule, path)` pairs.
    fn simplify_traced(&self) -> (Self, String) {
        let out = rewrite::simplify_traced(&self.0);
        let trace = serde_json::to_string(&out.trace).expect("traces serialize");
        (PyFormula(out.formula), trace)
    }
}

#[pyclass(name = "LassoWord", module = "tel", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyWord(LassoWord);

#[pymethods]
impl PyWord {
    /// Parse `u | v` (letters `a;b`, or proposition sets `{p,q};{}`).
    #[new]
    #[pyo3(signature = (text, alphabet = None, mode = None))]
    fn new(text: &str, alphabet: Option<Vec<String>>, mode: Option<&str>) -> PyResult<Self> {
        let m = self::mode(mode)?;
        let w = match alphabet {
            Some(symbols) => {
                let m = m.unwrap_or(if text.contains('{') { Mode::Props } else { Mode::Letters });
                let alphabet = Alphabet::new(symbols, m).map_err(value_error)?;
                LassoWord::parse(text, &alphabet)
            }
            None => LassoWord::parse_inferring(text, m),
        };
        w.map(PyWord).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_literal()
    }

    fn __repr__(&self) -> String {
        format!("LassoWord({:?})", self.0.to_literal())
    }

    #[getter]
    fn prefix_len(&self) -> usize {
        self.0.prefix_len()
    }

    #[getter]
    fn loop_len(&self) -> usize {
        self.0.loop_len()
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.0.alphabet().symbols().to_vec()
    }

    fn canonical_position(&self, i: u64) -> PyResult<u64> {
        if i == 0 {
            return Err(PyValueError::new_err("positions start at 1"));
        }
        Ok(self.0.canonical_position(i))
    }

    /// Symbols holding at position `i` (1-based).
    fn letter_at(&self, i: u64) -> PyResult<Vec<String>> {
        if i == 0 {
            return Err(PyValueError::new_err("positions start at 1"));
        }
        Ok(self.0.letter_at(i).symbols(self.0.alphabet()).map(str::to_string).collect())
    }
}

/// Truth of a closed formula at `position`: `True`, `False` or `None`
/// when the quantifier bound could not settle it.
#[pyfunction]
#[pyo3(signature = (formula, word, position = 1, bound = None, assume_complete = false))]
fn check(formula: &PyFormula, word: &PyWord, position: u64, bound: Option<u64>, assume_complete: bool) -> PyResult<Option<bool>> {
    let cfg = config(bound, assume_complete);
    tel_core::eval(&word.0, position, &formula.0, &Env::new(), &cfg).map(truth).map_err(value_error)
}

/// Like `check`, also returning the witness of each leading quantifier.
#[pyfunction]
#[pyo3(signature = (formula, word, position = 1, bound = None, assume_complete = false))]
fn evaluate(
    formula: &PyFormula,
    word: &PyWord,
    position: u64,
    bound: Option<u64>,
    assume_complete: bool,
) -> PyResult<(Option<bool>, Witness)> {
    let cfg = config(bound, assume_complete);
    let e = tel_core::evaluate(&word.0, position, &formula.0, &Env::new(), &cfg).map_err(value_error)?;
    Ok((truth(e.truth), e.witness))
}

#[pyfunction]
fn translate_ltl(text: &str) -> PyResult<PyFormula> {
    Ok(PyFormula(ltl_to_tel(&parse_ltl(text).map_err(value_error)?)))
}

#[pyfunction]
fn translate_tcl(text: &str) -> PyResult<PyFormula> {
    Ok(PyFormula(tcl_to_tel(&parse_tcl(text).map_err(value_error)?)))
}

/// Run and acceptance formulas of a Büchi automaton given as JSON.
#[pyfunction]
fn encode_buchi(automaton_json: &str) -> PyResult<(PyFormula, PyFormula)> {
    let a = BuchiAutomaton::from_json(automaton_json).map_err(value_error)?;
    Ok((PyFormula(a.encode_runs()), PyFormula(a.encode_acceptance())))
}

#[pyfunction]
#[pyo3(signature = (instance_json, budget = DEFAULT_NODE_BUDGET))]
fn encode_pcp(instance_json: &str, budget: usize) -> PyResult<PyFormula> {
    let inst = PcpInstance::from_json(instance_json).map_err(value_error)?;
    enc::pcp_encode_with_budget(&inst, budget).map(PyFormula).map_err(value_error)
}

#[pyfunction]
fn pcp_witness(instance_json: &str, indices: Vec<usize>) -> PyResult<PyWord> {
    let inst = PcpInstance::from_json(instance_json).map_err(value_error)?;
    enc::pcp_witness(&inst, &indices).map(PyWord).map_err(value_error)
}

/// Evaluate a closed formula on every subject of an event CSV
/// (`subject_id,time,code`); returns the report as JSON.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (formula, data, bin = "none", origin = None, first_only = false, bound = None, assume_complete = false))]
fn query(
    py: Python<'_>,
    formula: &PyFormula,
    data: PathBuf,
    bin: &str,
    origin: Option<&str>,
    first_only: bool,
    bound: Option<u64>,
    assume_complete: bool,
) -> PyResult<String> {
    let bin: Bin = bin.parse().map_err(value_error)?;
    let origin = origin.map(|s| s.parse::<NaiveDate>()).transpose().map_err(value_error)?;
    let positions = if first_only { Positions::FirstOnly } else { Positions::All };
    let phi = formula.0.clone();
    let cfg = config(bound, assume_complete);
    py.detach(move || {
        let cohort = cohort::ingest_csv(&data, &IngestOptions { bin, origin })?;
        cohort::run_query(&phi, &cohort, &cfg, positions).map(|r| r.to_json())
    })
    .map_err(value_error)
}

#[pymodule]
fn tel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(translate_ltl, m)?)?;
    m.add_function(wrap_pyfunction!(translate_tcl, m)?)?;
    m.add_function(wrap_pyfunction!(encode_buchi, m)?)?;
    m.add_function(wrap_pyfunction!(encode_pcp, m)?)?;
    m.add_function(wrap_pyfunction!(pcp_witness, m)?)?;
    m.add_function(wrap_pyfunction!(query, m)?)?;
    Ok(())
}
