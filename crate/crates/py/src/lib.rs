//! Python bindings. Results are returned as plain dicts decoded from the same
//! JSON the command-line tool prints.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use treecut::{GeometricTree, Shape, Shortcut, TreePoint};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A location on the edge `(u, v)`, `lam` of the way from `u` to `v`.
#[pyclass(name = "TreePoint", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyTreePoint(TreePoint);

#[pymethods]
impl PyTreePoint {
    #[new]
    fn new(u: i64, v: i64, lam: f64) -> PyResult<Self> {
        if !(0.0..=1.0).contains(&lam) {
            return Err(value_err(format!("lambda {lam} is outside [0, 1]")));
        }
        Ok(PyTreePoint(TreePoint::new(u, v, lam)))
    }

    #[getter]
    fn edge(&self) -> (i64, i64) {
        self.0.edge
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.0.lambda
    }

    fn __repr__(&self) -> String {
        format!("TreePoint({}, {}, {})", self.0.edge.0, self.0.edge.1, self.0.lambda)
    }
}

/// An immutable geometric tree with Euclidean edge lengths.
#[pyclass(name = "Tree", frozen)]
struct PyTree(GeometricTree);

#[pymethods]
impl PyTree {
    /// `vertices` holds `(id, x, y)` triples, `edges` pairs of ids.
    #[new]
    #[pyo3(signature = (vertices, edges, tolerance_scale = 1.0))]
    fn new(vertices: Vec<(i64, f64, f64)>, edges: Vec<(i64, i64)>, tolerance_scale: f64) -> PyResult<Self> {
        let t = GeometricTree::new(vertices, edges).map_err(value_err)?;
        Ok(PyTree(t.with_tolerance_scale(tolerance_scale)))
    }

    #[staticmethod]
    fn from_json(document: &str) -> PyResult<Self> {
        treecut::load_tree(document).map(PyTree).map_err(value_err)
    }

    /// Seeded random tree; `shape` is "uniform", "caterpillar" or "balanced".
    #[staticmethod]
    #[pyo3(signature = (seed, n, shape = "uniform"))]
    fn random(seed: u64, n: usize, shape: &str) -> PyResult<Self> {
        let shape: Shape = shape.parse().map_err(value_err)?;
        Ok(PyTree(treecut::random_tree(seed, n, shape)))
    }

    /// Tree from the family whose outward sweep has quadratically many raw changes.
    #[staticmethod]
    fn stress(l: usize) -> Self {
        PyTree(treecut::stress_family(l))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    fn network_distance(&self, a: PyTreePoint, b: PyTreePoint) -> PyResult<f64> {
        self.0.network_distance(&a.0, &b.0).map_err(value_err)
    }

    fn diameter<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &treecut::continuous_diameter(&self.0))
    }

    fn center<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &treecut::absolute_center(&self.0))
    }

    fn backbone<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &treecut::backbone(&self.0))
    }

    /// Diameter of the tree plus the segment `pq`, with the pairs attaining it.
    fn evaluate<'py>(&self, py: Python<'py>, p: PyTreePoint, q: PyTreePoint) -> PyResult<Bound<'py, PyAny>> {
        let s = Shortcut { p: p.0, q: q.0 };
        let bd = treecut::backbone(&self.0);
        to_py(py, &treecut::augmented_diameter(&self.0, &bd, &s).map_err(value_err)?)
    }

    /// "useful", "indifferent" or "useless".
    fn usefulness(&self, p: PyTreePoint, q: PyTreePoint) -> PyResult<String> {
        let u = treecut::classify_usefulness(&self.0, &Shortcut { p: p.0, q: q.0 }).map_err(value_err)?;
        Ok(serde_json::to_value(u.kind).map_err(value_err)?.as_str().unwrap_or_default().to_string())
    }

    #[pyo3(signature = (trace = false))]
    fn optimize<'py>(&self, py: Python<'py>, trace: bool) -> PyResult<Bound<'py, PyAny>> {
        let mut r = py.detach(|| treecut::optimize(&self.0));
        if !trace {
            r.events.clear();
        }
        to_py(py, &r)
    }

    #[pyo3(signature = (resolution, restrict_backbone = true))]
    fn grid_search<'py>(&self, py: Python<'py>, resolution: f64, restrict_backbone: bool) -> PyResult<Bound<'py, PyAny>> {
        let g = py.detach(|| treecut::grid_search(&self.0, resolution, restrict_backbone)).map_err(value_err)?;
        to_py(py, &g)
    }

    /// SVG drawing, with the shortcut `pq` and its diametral pairs when given.
    #[pyo3(signature = (p = None, q = None))]
    fn render_svg(&self, p: Option<PyTreePoint>, q: Option<PyTreePoint>) -> PyResult<String> {
        let shortcut = match (p, q) {
            (Some(p), Some(q)) => Some(Shortcut { p: p.0, q: q.0 }),
            (None, None) => None,
            _ => return Err(value_err("give both endpoints or neither")),
        };
        let diagnosis = match &shortcut {
            Some(s) => Some(treecut::augmented_diameter(&self.0, &treecut::backbone(&self.0), s).map_err(value_err)?),
            None => None,
        };
        Ok(treecut::render_svg(&self.0, shortcut.as_ref(), diagnosis.as_ref()))
    }
}

#[pymodule]
#[pyo3(name = "treecut")]
fn treecut_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTree>()?;
    m.add_class::<PyTreePoint>()?;
    Ok(())
}
