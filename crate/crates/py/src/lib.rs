//! Python bindings: formulas, models, contexts, evaluation, countermodel
//! search, the V comparison and the proof checker.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde_json::{json, Value};

use conwon::lewis_v::{self, SatResult};
use conwon::search::{find_countermodel, Bounds, Countermodel};
use conwon::{fixtures, formula, io, proof, reduction, semantics, Dialect};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dialect_arg(d: Option<&str>, text: &str) -> PyResult<Dialect> {
    match d {
        Some(d) => d.parse().map_err(value_error),
        None if text.contains("|>") || text.contains('▷') => Ok(Dialect::V),
        None => Ok(Dialect::ConWon),
    }
}

/// Hand a JSON value to Python as plain dicts and lists.
fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

#[pyclass(name = "Formula", module = "conwon_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFormula {
    inner: formula::Formula,
}

#[pymethods]
impl PyFormula {
    /// Parse `text`. Without `dialect`, text containing `|>` or `▷` is read as V.
    #[new]
    #[pyo3(signature = (text, dialect=None))]
    fn new(text: &str, dialect: Option<&str>) -> PyResult<Self> {
        let d = dialect_arg(dialect, text)?;
        let inner = formula::parse_formula(text, d).map_err(value_error)?;
        Ok(PyFormula { inner })
    }

    fn __str__(&self) -> String {
        formula::render_pretty(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", formula::render(&self.inner))
    }

    fn __eq__(&self, other: &PyFormula) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    /// Fully parenthesised rendering.
    fn render(&self) -> String {
        formula::render(&self.inner)
    }

    #[getter]
    fn is_propositional(&self) -> bool {
        self.inner.is_propositional()
    }

    #[getter]
    fn is_flat(&self) -> bool {
        self.inner.is_flat()
    }

    #[getter]
    fn is_closed(&self) -> bool {
        self.inner.is_closed()
    }

    #[getter]
    fn modal_depth(&self) -> usize {
        self.inner.classify().modal_depth
    }

    /// `"conwon"`, `"v"`, or `None` for purely propositional formulas.
    #[getter]
    fn dialect(&self) -> PyResult<Option<String>> {
        Ok(self.inner.dialect().map_err(value_error)?.map(|d| d.to_string()))
    }

    #[getter]
    fn atoms(&self) -> Vec<String> {
        self.inner.atoms().into_iter().map(String::from).collect()
    }

    /// The flat equivalent produced by the reduction.
    fn sigma(&self) -> PyResult<PyFormula> {
        let inner = reduction::sigma(&self.inner).map_err(value_error)?;
        Ok(PyFormula { inner })
    }

    fn translate(&self, dialect: &str) -> PyResult<PyFormula> {
        let d: Dialect = dialect.parse().map_err(value_error)?;
        let inner = formula::translate_flat(&self.inner, d).map_err(value_error)?;
        Ok(PyFormula { inner })
    }
}

#[pyclass(name = "Model", module = "conwon_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModel {
    inner: conwon::Model,
}

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyModel { inner: io::model_from_json(text).map_err(value_error)? })
    }

    fn to_json(&self) -> String {
        io::model_to_json(&self.inner)
    }

    #[getter]
    fn worlds(&self) -> Vec<String> {
        self.inner.worlds().to_vec()
    }

    /// Worlds where a propositional formula holds.
    fn extension(&self, f: &PyFormula) -> PyResult<Vec<String>> {
        let s = semantics::extension(&self.inner, &f.inner).map_err(value_error)?;
        Ok(names(&self.inner, s))
    }

    fn __repr__(&self) -> String {
        format!("Model(worlds={:?})", self.inner.worlds())
    }
}

#[pyclass(name = "Context", module = "conwon_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyContext {
    inner: conwon::Context,
    model: conwon::Model,
}

#[pymethods]
impl PyContext {
    #[staticmethod]
    fn from_json(text: &str, model: &PyModel) -> PyResult<Self> {
        let inner = io::context_from_json(text, &model.inner).map_err(value_error)?;
        Ok(PyContext { inner, model: model.inner.clone() })
    }

    fn to_json(&self) -> String {
        io::context_to_json(&self.inner, &self.model)
    }
}

fn names(m: &conwon::Model, s: conwon::WorldSet) -> Vec<String> {
    s.iter().map(|w| m.world_name(w).to_string()).collect()
}

fn world_index(m: &conwon::Model, world: &str) -> PyResult<usize> {
    m.world_index(world).ok_or_else(|| PyIndexError::new_err(format!("unknown world '{world}'")))
}

/// Truth value of `formula` at `world`.
#[pyfunction]
fn eval(model: &PyModel, context: &PyContext, world: &str, formula: &PyFormula) -> PyResult<bool> {
    let w = world_index(&model.inner, world)?;
    semantics::eval(&model.inner, &context.inner, w, &formula.inner).map_err(value_error)
}

/// Worlds where `formula` holds.
#[pyfunction]
fn truth_set(model: &PyModel, context: &PyContext, formula: &PyFormula) -> PyResult<Vec<String>> {
    let s = semantics::truth_set(&model.inner, &context.inner, &formula.inner).map_err(value_error)?;
    Ok(names(&model.inner, s))
}

/// Evaluation trace as text, one line per subformula.
#[pyfunction]
fn trace(model: &PyModel, context: &PyContext, world: &str, formula: &PyFormula) -> PyResult<String> {
    let w = world_index(&model.inner, world)?;
    let (_, t) = semantics::eval_traced(&model.inner, &context.inner, w, &formula.inner).map_err(value_error)?;
    Ok(t.render(&model.inner))
}

fn countermodel_value(cm: &Countermodel) -> Value {
    json!({
        "model": io::model_to_value(&cm.model),
        "context": io::context_to_value(&conwon::Context::Sequence(cm.context.clone()), &cm.model),
        "world": cm.model.world_name(cm.world),
    })
}

fn sat_value(r: &SatResult) -> Value {
    json!({
        "conwon": r.conwon.as_ref().map(countermodel_value),
        "v": r.v.as_ref().map(|(ps, w)| json!({"model": io::pseudo_sphere_to_value(ps), "world": ps.model.world_name(*w)})),
        "transports": r.transports,
    })
}

/// First countermodel within the bounds, or `None`.
#[pyfunction]
#[pyo3(signature = (formula, max_worlds=3, max_context_len=5))]
fn falsify(py: Python<'_>, formula: &PyFormula, max_worlds: usize, max_context_len: usize) -> PyResult<Option<Py<PyAny>>> {
    let bounds = Bounds::new(max_worlds, max_context_len);
    let found = py.detach(|| find_countermodel(&formula.inner, &bounds)).map_err(value_error)?;
    found.map(|cm| to_py(py, &countermodel_value(&cm))).transpose()
}

/// Satisfiability and bounded validity of a flat formula in both semantics.
#[pyfunction]
#[pyo3(signature = (formula, max_worlds=3, max_context_len=5))]
fn compare_v(py: Python<'_>, formula: &PyFormula, max_worlds: usize, max_context_len: usize) -> PyResult<Py<PyAny>> {
    let bounds = Bounds::new(max_worlds, max_context_len);
    let r = py.detach(|| lewis_v::flat_equivalence_check(&formula.inner, &bounds)).map_err(value_error)?;
    let v = json!({
        "conwon_formula": formula::render_pretty(&r.conwon_formula),
        "v_formula": formula::render_pretty(&r.v_formula),
        "satisfiable": sat_value(&r.satisfiable),
        "falsifiable": sat_value(&r.falsifiable),
        "agree": r.agree(),
        "transports_ok": r.transports_ok(),
    });
    to_py(py, &v)
}

/// Check a proof given as JSON text; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (text, system=None))]
fn check_proof(py: Python<'_>, text: &str, system: Option<&str>) -> PyResult<Py<PyAny>> {
    let system = system.map(|s| s.parse::<proof::System>()).transpose().map_err(value_error)?;
    let p = proof::Proof::from_json(text, system).map_err(value_error)?;
    let report = proof::check_proof(&p);
    to_py(py, &serde_json::to_value(&report).map_err(value_error)?)
}

#[pyfunction]
fn examples() -> Vec<&'static str> {
    fixtures::NAMES.to_vec()
}

/// Model, context, world and formulas of a bundled example.
#[pyfunction]
fn example(name: &str) -> PyResult<(PyModel, PyContext, String, Vec<PyFormula>)> {
    let ex = match name {
        "tiger" => fixtures::tiger(),
        "reagan" => fixtures::reagan(),
        "nonmono" => fixtures::nonmono(),
        "figure1" => fixtures::figure1(),
        other => return Err(PyValueError::new_err(format!("no bundled model for '{other}'"))),
    };
    let formulas = ex.formulas.into_iter().map(|inner| PyFormula { inner }).collect();
    let ctx = PyContext { inner: ex.context, model: ex.model.clone() };
    Ok((PyModel { inner: ex.model }, ctx, ex.world.to_string(), formulas))
}

#[pymodule]
fn conwon_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyContext>()?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(truth_set, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(falsify, m)?)?;
    m.add_function(wrap_pyfunction!(compare_v, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add_function(wrap_pyfunction!(example, m)?)?;
    Ok(())
}
