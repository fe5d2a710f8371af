//! Python bindings. Rationals cross the boundary as strings such as `"3/4"`;
//! reports come back as plain dicts.

use bollobas::io;
use bollobas::{
    certify_full_system, check, construct as build, embed, evaluate_inequality, omega, saturate, search_max,
    Condition, ConditionKind, Field, Flavor, FunctionalKind, Ground, Objective, ProbabilityVector, SearchProblem,
    System,
};
use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

fn err(e: bollobas::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

fn functional(name: &str, p: Option<&str>) -> PyResult<FunctionalKind> {
    let p = p.map(str::parse::<ProbabilityVector>).transpose().map_err(err)?;
    FunctionalKind::from_name(name, p).map_err(err)
}

fn condition(name: &str) -> PyResult<Condition> {
    name.parse().map_err(err)
}

#[pyclass(name = "System", module = "pybollobas", frozen)]
struct PySystem {
    inner: System,
}

fn wrap(inner: System) -> PySystem {
    PySystem { inner }
}

#[pymethods]
impl PySystem {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_system(text).map(wrap).map_err(err)
    }

    fn to_json(&self) -> String {
        io::serialize_system(&self.inner)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner {
            System::Set(_) => "set",
            System::Subspace(_) => "subspace",
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.ground()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.arity()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("System(kind={}, n={}, d={}, m={})", self.kind(), self.n(), self.d(), self.inner.len())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    /// Verdict and first violation `(i, j)` (1-based), if any.
    #[pyo3(signature = (condition = "skew", monotone = false))]
    fn verify(&self, condition: &str, monotone: bool) -> PyResult<(bool, Option<(usize, usize)>)> {
        let c = self::condition(condition)?;
        let report = if monotone {
            bollobas::verify(&self.inner, ConditionKind::for_system(&self.inner, c).monotone())
        } else {
            check(&self.inner, c)
        }
        .map_err(err)?;
        Ok((report.verdict, report.first_violation.map(|v| (v.i, v.j))))
    }

    #[pyo3(signature = (functional, p = None))]
    fn omega(&self, functional: &str, p: Option<&str>) -> PyResult<String> {
        let kind = self::functional(functional, p)?;
        omega(&self.inner, &kind).map(|w| w.to_string()).map_err(err)
    }

    /// Value, bound, licence and tightness of the inequality for `functional`.
    #[pyo3(signature = (functional, p = None))]
    fn evaluate<'py>(&self, py: Python<'py>, functional: &str, p: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let kind = self::functional(functional, p)?;
        let verdict = evaluate_inequality(&self.inner, &kind).map_err(err)?;
        to_py(py, &io::inequality_json(&verdict))
    }

    /// Saturation summary; the saturated system is under `"final_system"`.
    #[pyo3(signature = (flavor = "set", steps = false))]
    fn saturate<'py>(&self, py: Python<'py>, flavor: &str, steps: bool) -> PyResult<Bound<'py, PyAny>> {
        let flavor: Flavor = flavor.parse().map_err(err)?;
        let trace = saturate(&self.inner, flavor).map_err(err)?;
        to_py(py, &io::trace_json(&trace, steps))
    }

    fn saturated(&self, flavor: &str) -> PyResult<Self> {
        let flavor: Flavor = flavor.parse().map_err(err)?;
        saturate(&self.inner, flavor).map(|t| wrap(t.final_system)).map_err(err)
    }

    #[pyo3(signature = (functional, p = None))]
    fn certify<'py>(&self, py: Python<'py>, functional: &str, p: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let kind = self::functional(functional, p)?;
        let cert = certify_full_system(&self.inner, &kind).map_err(err)?;
        to_py(py, &io::full_certificate_json(&cert))
    }

    fn embed(&self) -> PyResult<Self> {
        match &self.inner {
            System::Set(s) => Ok(wrap(System::Subspace(embed(s)))),
            System::Subspace(_) => Err(PyValueError::new_err("already a subspace system")),
        }
    }

    fn reversed(&self) -> Self {
        wrap(self.inner.reversed())
    }
}

/// Builds a named family, e.g. `"complement-chain(4)"`.
#[pyfunction]
fn construct(family: &str) -> PyResult<PySystem> {
    let kind = family.parse().map_err(err)?;
    build(&kind).map(wrap).map_err(err)
}

#[pyfunction]
fn binomial(n: u64, k: i64) -> BigUint {
    bollobas::binomial(n, k)
}

#[pyfunction]
fn multinomial(parts: Vec<u64>) -> BigUint {
    bollobas::multinomial(&parts)
}

/// Largest system under `condition` on a small ground, with a witness.
#[pyfunction]
#[pyo3(signature = (n, d = 2, condition = "skew", domain = "set", field = "gf(2)", budget = 1_000_000))]
fn search_max_m(
    n: usize,
    d: usize,
    condition: &str,
    domain: &str,
    field: &str,
    budget: u64,
) -> PyResult<(String, PySystem, bool)> {
    let ground = match domain {
        "set" => Ground::Set { n },
        "subspace" => Ground::Subspace {
            n,
            field: field.parse::<Field>().map_err(err)?,
        },
        other => return Err(PyValueError::new_err(format!("unknown domain {other:?}"))),
    };
    let mut problem = SearchProblem::new(ground, d, self::condition(condition)?, Objective::MaxM);
    problem.node_budget = budget;
    let result = search_max(&problem).map_err(err)?;
    Ok((result.best_value.to_string(), wrap(result.witness), result.exhaustive))
}

#[pymodule]
fn pybollobas(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(multinomial, m)?)?;
    m.add_function(wrap_pyfunction!(search_max_m, m)?)?;
    Ok(())
}
