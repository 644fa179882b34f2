//! Python bindings: `import ekrw`.
//!
//! Families are wrapped in [`Family`]; reports that are records on the Rust
//! side (bounds, traces, search outcomes, verdicts) cross over as plain
//! dicts built from their JSON form.

use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ekrw_core::canonical::{build, bounds_report, CanonicalSpec};
use ekrw_core::family::edge_from_list;
use ekrw_core::search::{enumerate_maximum, max_family, ConstraintSet, SearchConfig};
use ekrw_core::separability::{build_prop1_family, build_prop2_family, non_separable, DisjointnessGraph, SetSystem};
use ekrw_core::shifting::{
    ai_profile, beyond_hm, counting_window, enumerate_shift_preimages, hm_or_ekr_centers, is_stable, shift_family, stabilize,
    stabilize_guarded,
};
use ekrw_core::verify::{class_name, verify_theorem, Theorem};
use ekrw_core::{are_isomorphic, embeds_into, random_intersecting, EdgeMask, SetFamily};

fn err(e: ekrw_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: String) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn record<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, text)
}

fn mask(list: &[usize]) -> EdgeMask {
    EdgeMask::from_elements(list.iter().copied())
}

fn masks(n: usize, sets: &[Vec<usize>]) -> PyResult<Vec<EdgeMask>> {
    sets.iter().map(|s| edge_from_list(n, s).map_err(err)).collect()
}

fn config(budget: Option<f64>, workers: usize) -> SearchConfig {
    SearchConfig { budget: budget.map(Duration::from_secs_f64), workers: workers.max(1), ..SearchConfig::default() }
}

/// A k-uniform family on `{0..n-1}`, stored in canonical order.
#[pyclass(name = "Family", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Family(SetFamily);

#[pymethods]
impl Family {
    #[new]
    fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> PyResult<Family> {
        SetFamily::new(n, k, masks(n, &edges)?).map(Family).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Family> {
        SetFamily::from_json(text).map(Family).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<usize>> {
        self.0.edge_lists()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Family(n={}, k={}, len={})", self.0.n(), self.0.k(), self.0.len())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn is_intersecting(&self) -> bool {
        self.0.is_intersecting()
    }

    /// Common element of every edge, or `None`.
    fn trivial_center(&self) -> PyResult<Option<usize>> {
        self.0.is_trivial().map_err(err)
    }

    fn degrees(&self) -> Vec<usize> {
        self.0.degrees()
    }

    fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    fn relabel(&self, map: Vec<usize>, n: usize) -> PyResult<Family> {
        self.0.relabel(&map, n).map(Family).map_err(err)
    }

    fn isomorphic_to(&self, other: &Family) -> bool {
        are_isomorphic(&self.0, &other.0)
    }

    /// A vertex map sending this family into `other`, if one exists.
    fn embeds_into(&self, other: &Family) -> PyResult<Option<Vec<usize>>> {
        embeds_into(&self.0, &other.0).map_err(err)
    }

    /// Name of the named construction this family is isomorphic to.
    fn class_name(&self) -> Option<String> {
        class_name(&self.0)
    }

    fn hm_or_ekr_centers(&self) -> Vec<usize> {
        hm_or_ekr_centers(&self.0).to_vec()
    }

    fn beyond_hm(&self) -> bool {
        beyond_hm(&self.0)
    }

    fn shift(&self, x: usize, y: usize) -> PyResult<Family> {
        shift_family(&self.0, x, y).map(Family).map_err(err)
    }

    /// Shift to a stable family. Returns the family and the trace as a dict.
    #[pyo3(signature = (exclude = Vec::new(), guarded = false))]
    fn stabilize<'py>(&self, py: Python<'py>, exclude: Vec<usize>, guarded: bool) -> PyResult<(Family, Bound<'py, PyAny>)> {
        let trace = if guarded { stabilize_guarded(&self.0, mask(&exclude)).map_err(err)? } else { stabilize(&self.0, mask(&exclude)) };
        Ok((Family(trace.final_family.clone()), record(py, &trace)?))
    }

    #[pyo3(signature = (exclude = Vec::new()))]
    fn is_stable(&self, exclude: Vec<usize>) -> bool {
        is_stable(&self.0, mask(&exclude))
    }

    /// Every intersecting family sent onto this one by `S_xy`.
    fn preimages(&self, x: usize, y: usize) -> PyResult<Vec<Family>> {
        Ok(enumerate_shift_preimages(&self.0, x, y).map_err(err)?.into_iter().map(Family).collect())
    }

    /// `A_i` counts on `window`, or on the counting window when omitted.
    #[pyo3(signature = (window = None, exclude = Vec::new()))]
    fn profile(&self, window: Option<Vec<usize>>, exclude: Vec<usize>) -> std::collections::BTreeMap<usize, usize> {
        let window = window.map(|w| mask(&w)).unwrap_or_else(|| counting_window(self.0.n(), self.0.k(), mask(&exclude)));
        ai_profile(&self.0, window).counts
    }

    fn non_separable(&self) -> bool {
        non_separable(&SetSystem::from(&self.0))
    }
}

fn named(spec: CanonicalSpec) -> PyResult<Family> {
    build(&spec).map(Family).map_err(err)
}

#[pyfunction]
fn star(n: usize, k: usize) -> PyResult<Family> {
    named(CanonicalSpec::star(n, k))
}

#[pyfunction]
fn hilton_milner(n: usize, k: usize) -> PyResult<Family> {
    named(CanonicalSpec::hilton_milner(n, k))
}

#[pyfunction]
fn triangle(n: usize, k: usize) -> PyResult<Family> {
    named(CanonicalSpec::triangle(n, k))
}

#[pyfunction]
fn g_family(n: usize, k: usize, i: usize) -> PyResult<Family> {
    named(CanonicalSpec::g(n, k, i))
}

#[pyfunction]
fn j_family(n: usize, k: usize, i: usize) -> PyResult<Family> {
    named(CanonicalSpec::j(n, k, i))
}

/// `(name, family)` for every named construction valid at `(n, k)`.
#[pyfunction]
fn all_named(n: usize, k: usize) -> PyResult<Vec<(String, Family)>> {
    CanonicalSpec::all_named(n, k).into_iter().map(|s| Ok((s.name(), named(s)?))).collect()
}

#[pyfunction]
#[pyo3(signature = (n, k, s = 2))]
fn bounds(py: Python<'_>, n: usize, k: usize, s: usize) -> PyResult<Bound<'_, PyAny>> {
    record(py, &bounds_report(n, k, s))
}

#[pyfunction]
fn random_family(n: usize, k: usize, max_len: usize, seed: u64) -> PyResult<Family> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_intersecting(n, k, max_len, &mut rng).map(Family).map_err(err)
}

/// Whether the set system `sets` on `{0..n-1}` is non-separable.
#[pyfunction]
fn is_non_separable(n: usize, sets: Vec<Vec<usize>>) -> PyResult<bool> {
    Ok(non_separable(&SetSystem::new(n, masks(n, &sets)?).map_err(err)?))
}

/// Components of the disjointness graph, as lists of set indices.
#[pyfunction]
fn disjointness_components(n: usize, sets: Vec<Vec<usize>>) -> PyResult<Vec<Vec<usize>>> {
    Ok(DisjointnessGraph::new(&SetSystem::new(n, masks(n, &sets)?).map_err(err)?).components())
}

#[pyfunction]
#[pyo3(signature = (c, a, b, s = None))]
fn prop1_system(c: usize, a: usize, b: usize, s: Option<usize>) -> PyResult<Vec<Vec<usize>>> {
    let sys = build_prop1_family(c, a, b, s).map_err(err)?;
    Ok(sys.sets().iter().map(|e| e.to_vec()).collect())
}

#[pyfunction]
fn prop2_family(m: usize, r: usize, asize: usize) -> PyResult<Family> {
    build_prop2_family(m, r, asize).map(Family).map_err(err)
}

/// Exact maximum admissible family. `forbid` is a comma list from
/// `trivial`, `hm`, `g2`, `j2`; `budget` is in seconds.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (n, k, forbid = "", degree_cap = None, budget = None, workers = 1, enumerate = false))]
fn search<'py>(
    py: Python<'py>,
    n: usize,
    k: usize,
    forbid: &str,
    degree_cap: Option<usize>,
    budget: Option<f64>,
    workers: usize,
    enumerate: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let mut constraints = ConstraintSet::parse_forbid(forbid).map_err(err)?;
    constraints.max_degree_cap = degree_cap;
    let cfg = config(budget, workers);
    let out = py
        .detach(|| if enumerate { enumerate_maximum(n, k, &constraints, &cfg) } else { max_family(n, k, &constraints, &cfg) })
        .map_err(err)?;
    record(py, &out)
}

/// Check one theorem (`ekr`, `hm`, `hm2:<s>`, `main`, `maxdeg`) at `(n, k)`.
#[pyfunction]
#[pyo3(signature = (theorem, n, k, budget = None, workers = 1))]
fn verify<'py>(py: Python<'py>, theorem: &str, n: usize, k: usize, budget: Option<f64>, workers: usize) -> PyResult<Bound<'py, PyAny>> {
    let theorem: Theorem = theorem.parse().map_err(err)?;
    let cfg = config(budget, workers);
    let report = py.detach(|| verify_theorem(theorem, n, k, &cfg)).map_err(err)?;
    record(py, &report)
}

#[pymodule]
fn ekrw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Family>()?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(hilton_milner, m)?)?;
    m.add_function(wrap_pyfunction!(triangle, m)?)?;
    m.add_function(wrap_pyfunction!(g_family, m)?)?;
    m.add_function(wrap_pyfunction!(j_family, m)?)?;
    m.add_function(wrap_pyfunction!(all_named, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(random_family, m)?)?;
    m.add_function(wrap_pyfunction!(is_non_separable, m)?)?;
    m.add_function(wrap_pyfunction!(disjointness_components, m)?)?;
    m.add_function(wrap_pyfunction!(prop1_system, m)?)?;
    m.add_function(wrap_pyfunction!(prop2_family, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
