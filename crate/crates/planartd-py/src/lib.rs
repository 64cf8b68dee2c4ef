//! Python bindings: embedded graphs, generators, decomposition,
//! validation and the exact oracle.

use planartd::fmt;
use planartd::layering::{compute_heights, find_crests};
use planartd::verify;
use planartd::{decompose, DecomposeConfig, DecomposeError, EmbeddedGraph};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An embedded planar graph (rotation system plus outer face).
#[pyclass(name = "Graph")]
struct PyGraph {
    inner: EmbeddedGraph,
}

#[pymethods]
impl PyGraph {
    /// Parse from Gr and Emb file contents.
    #[staticmethod]
    fn from_text(gr: &str, emb: &str) -> PyResult<Self> {
        let gr = fmt::parse_gr(gr).map_err(value_err)?;
        let g = fmt::parse_emb(emb, &gr).map_err(value_err)?;
        Ok(PyGraph { inner: g })
    }

    #[staticmethod]
    #[pyo3(signature = (rows, cols, triangulate = false))]
    fn grid(rows: usize, cols: usize, triangulate: bool) -> PyResult<Self> {
        Ok(PyGraph { inner: planartd::gen::grid(rows, cols, triangulate).map_err(value_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed = 0))]
    fn triangulation(n: usize, seed: u64) -> PyResult<Self> {
        Ok(PyGraph { inner: planartd::gen::triangulation(n, seed).map_err(value_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (summits, height, seed = 0))]
    fn mountain_chain(summits: usize, height: u32, seed: u64) -> PyResult<Self> {
        Ok(PyGraph {
            inner: planartd::gen::mountain_chain(summits, height, seed).map_err(value_err)?,
        })
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Structural diagnostics of the embedding.
    fn validate(&self, py: Python<'_>) -> PyResult<PyObject> {
        let rep = planartd::embed::validate_embedding(&self.inner);
        let d = pyo3::types::PyDict::new(py);
        d.set_item("ok", rep.ok())?;
        d.set_item("n", rep.n)?;
        d.set_item("m", rep.m)?;
        d.set_item("faces", rep.faces)?;
        d.set_item("euler_ok", rep.euler_ok)?;
        d.set_item("connected", rep.connected)?;
        d.set_item("biconnected", rep.biconnected)?;
        d.set_item("almost_triangulated", rep.almost_triangulated)?;
        d.set_item("problems", rep.problems.clone())?;
        Ok(d.into())
    }

    /// Peeling heights per vertex.
    fn heights(&self) -> PyResult<Vec<u32>> {
        Ok(compute_heights(&self.inner).map_err(value_err)?.h)
    }

    /// Crests: maximal same-height summit plateaus.
    fn crests(&self) -> PyResult<Vec<Vec<u32>>> {
        let hm = compute_heights(&self.inner).map_err(value_err)?;
        Ok(find_crests(&self.inner, &hm).into_iter().map(|c| c.vertices).collect())
    }

    fn is_mountain(&self) -> PyResult<bool> {
        let hm = compute_heights(&self.inner).map_err(value_err)?;
        Ok(planartd::layering::is_mountain(&self.inner, &hm))
    }

    /// Exact treewidth (graphs of at most 15 vertices).
    fn exact_treewidth(&self) -> PyResult<u32> {
        verify::exact_treewidth(&self.inner).map_err(value_err)
    }

    /// Tree decomposition; `k=None` searches for a budget.
    #[pyo3(signature = (k = None, jobs = 1))]
    fn decompose(&self, k: Option<u32>, jobs: usize) -> PyResult<PyTd> {
        let cfg = DecomposeConfig { k, jobs };
        match decompose(&self.inner, &cfg) {
            Ok((td, stats)) => Ok(PyTd { td, k_used: stats.k_used }),
            Err(DecomposeError::KTooSmall { k, reason }) => Err(PyValueError::new_err(
                format!("k = {k} too small: {reason}"),
            )),
            Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
        }
    }

    fn to_gr(&self) -> String {
        fmt::graph_to_gr(&self.inner)
    }

    fn to_emb(&self) -> String {
        fmt::graph_to_emb(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// A tree decomposition: bags plus tree edges.
#[pyclass(name = "TreeDecomposition")]
struct PyTd {
    td: planartd::TreeDecomposition,
    k_used: u32,
}

#[pymethods]
impl PyTd {
    fn width(&self) -> i64 {
        self.td.width()
    }

    fn k_used(&self) -> u32 {
        self.k_used
    }

    fn bags(&self) -> Vec<Vec<u32>> {
        self.td.bags.clone()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.td.edges.clone()
    }

    /// Check the three decomposition clauses against a graph.
    fn validate(&self, py: Python<'_>, graph: &PyGraph) -> PyResult<PyObject> {
        let rep = verify::validate_td(&graph.inner, &self.td);
        let d = pyo3::types::PyDict::new(py);
        d.set_item("ok", rep.ok)?;
        d.set_item("width", rep.width)?;
        d.set_item("vertex_coverage", rep.vertex_coverage)?;
        d.set_item("edge_coverage", rep.edge_coverage)?;
        d.set_item("subtree_connectivity", rep.subtree_connectivity)?;
        d.set_item("offending", rep.offending.clone())?;
        Ok(d.into())
    }

    fn to_td(&self, n: usize) -> String {
        fmt::write_td(&self.td, n)
    }

    fn __repr__(&self) -> String {
        format!(
            "TreeDecomposition(width={}, bags={})",
            self.td.width(),
            self.td.bags.len()
        )
    }
}

#[pymodule]
fn planartd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyTd>()?;
    Ok(())
}
