//! Python bindings: literals in, literals out.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sprank_core::error::Error;
use sprank_core::{graph, ideals, monoid, sprank as sp};
use sprank_core::{Construction as CoreConstruction, NValue};

fn err(e: Error) -> PyErr {
    match e {
        Error::Overflow(_) | Error::Budget(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(frozen, eq, ord, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Ordinal(sprank_core::Ordinal);

impl std::fmt::Display for Ordinal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl Ordinal {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        literal.parse().map(Ordinal).map_err(err)
    }

    fn is_limit(&self) -> bool {
        self.0.is_limit()
    }

    fn is_successor(&self) -> bool {
        self.0.is_successor()
    }

    fn __add__(&self, other: &Ordinal) -> PyResult<Ordinal> {
        self.0.add(&other.0).map(Ordinal).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Ordinal('{}')", self.0)
    }
}

#[pyclass(frozen, eq, ord, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Vertex(sprank_core::Vertex);

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl Vertex {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        literal.parse().map(Vertex).map_err(err)
    }

    #[getter]
    fn height(&self) -> Ordinal {
        Ordinal(self.0.height().clone())
    }

    #[getter]
    fn index(&self) -> String {
        self.0.index().to_string()
    }

    fn children(&self, budget: usize) -> PyResult<Vec<Vertex>> {
        graph::children(&self.0, budget)
            .map(|cs| cs.into_iter().map(Vertex).collect())
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Vertex('{}')", self.0)
    }
}

#[pyclass(frozen, eq, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Monomial(sprank_core::Monomial);

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl Monomial {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        literal.parse().map(Monomial).map_err(err)
    }

    /// `(vertex, multiplicity)` pairs in canonical order.
    fn factors(&self) -> Vec<(Vertex, u64)> {
        self.0
            .factors()
            .map(|(v, m)| (Vertex(v.clone()), m))
            .collect()
    }

    fn __mul__(&self, other: &Monomial) -> PyResult<Monomial> {
        self.0.mul(&other.0).map(Monomial).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Monomial('{}')", self.0)
    }
}

/// One instance of the construction: `alpha` and a weight scheme.
#[pyclass(frozen)]
struct Construction(CoreConstruction);

fn key(s: &str) -> PyResult<ideals::MaxIdealKey> {
    s.parse().map_err(err)
}

#[pymethods]
impl Construction {
    #[new]
    #[pyo3(signature = (alpha = "3", scheme = "const:2"))]
    fn new(alpha: &str, scheme: &str) -> PyResult<Self> {
        let a = alpha.parse().map_err(err)?;
        let s = scheme.parse().map_err(err)?;
        CoreConstruction::new(a, s).map(Construction).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> Ordinal {
        Ordinal(self.0.alpha().clone())
    }

    #[getter]
    fn scheme(&self) -> String {
        self.0.scheme.to_string()
    }

    /// Vertices of the unique path, or `None`.
    fn find_path(&self, start: &Vertex, target: &Vertex) -> PyResult<Option<Vec<Vertex>>> {
        self.0.check_vertex(&start.0).map_err(err)?;
        self.0.check_vertex(&target.0).map_err(err)?;
        Ok(graph::find_path(&start.0, &target.0)
            .map(|p| p.vertices().iter().cloned().map(Vertex).collect()))
    }

    /// `(gcd, left quotient, right quotient)`.
    fn gcd(&self, x: &Monomial, y: &Monomial) -> PyResult<(Monomial, Monomial, Monomial)> {
        let g = monoid::monomial_gcd(&x.0, &y.0, &self.0.scheme).map_err(err)?;
        Ok((
            Monomial(g.gcd),
            Monomial(g.left_quotient),
            Monomial(g.right_quotient),
        ))
    }

    fn divides(&self, x: &Monomial, y: &Monomial) -> PyResult<bool> {
        monoid::monomial_divides(&x.0, &y.0, &self.0.scheme).map_err(err)
    }

    fn equal(&self, x: &Monomial, y: &Monomial) -> PyResult<bool> {
        monoid::monomial_equal(&x.0, &y.0, &self.0.scheme).map_err(err)
    }

    fn valuation(&self, key_literal: &str, m: &Monomial) -> PyResult<u64> {
        ideals::valuation(&key(key_literal)?, &m.0, &self.0.scheme).map_err(err)
    }

    fn contains(&self, key_literal: &str, m: &Monomial) -> PyResult<bool> {
        ideals::contains(&key(key_literal)?, &m.0, &self.0.scheme).map_err(err)
    }

    fn is_critical(&self, key_literal: &str, stage: &str) -> PyResult<bool> {
        let stage = stage.parse().map_err(err)?;
        sp::is_critical(&key(key_literal)?, &stage, &self.0.scheme)
            .map(|d| d.verdict)
            .map_err(err)
    }

    fn is_n_critical(&self, key_literal: &str, stage: &str, n: &str) -> PyResult<bool> {
        let stage = stage.parse().map_err(err)?;
        let n: NValue = n.parse().map_err(err)?;
        sp::is_n_critical(&key(key_literal)?, &stage, n, &self.0.scheme)
            .map(|d| d.verdict)
            .map_err(err)
    }

    /// Height threshold of the stage set at `beta`.
    fn crit_stage(&self, beta: &str) -> PyResult<Ordinal> {
        let beta = beta.parse().map_err(err)?;
        sp::crit_stage(&beta, &self.0)
            .map(|s| Ordinal(s.threshold))
            .map_err(err)
    }

    fn sp_rank(&self) -> PyResult<Ordinal> {
        sp::sp_rank(&self.0).map(Ordinal).map_err(err)
    }
}

/// Runs the command-line front end in-process: `(status, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = sprank_core::cli::run(std::iter::once("sprank".to_string()).chain(args));
    (out.status, out.stdout, out.stderr)
}

#[pymodule]
fn sprank(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ordinal>()?;
    m.add_class::<Vertex>()?;
    m.add_class::<Monomial>()?;
    m.add_class::<Construction>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
