//! Python bindings: polygons, paths, the pipeline, the verifiers and the
//! search oracle.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ic_paths::dead_region::build_dead_region;
use ic_paths::geodesic::shortest_path_simple;
use ic_paths::ic::{shortest_increasing_chords_path_with, IcResult, Tolerances};
use ic_paths::oracle::{falsification_search, SearchBudget};
use ic_paths::verify::{geodesic_between_check, verify_all, VerifyConfig, VerifyReport};
use ic_paths::{Location, PiecewisePath, Point, SimplePolygon};

type Xy = (f64, f64);

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pt(p: Xy) -> Point {
    Point::new(p.0, p.1)
}

fn xy(p: Point) -> Xy {
    (p.x, p.y)
}

#[pyclass(name = "Polygon", module = "ic_paths_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyPolygon {
    inner: SimplePolygon,
}

#[pymethods]
impl PyPolygon {
    #[new]
    fn new(vertices: Vec<Xy>) -> PyResult<Self> {
        let inner = SimplePolygon::new(vertices.into_iter().map(pt).collect()).map_err(err)?;
        Ok(PyPolygon { inner })
    }

    /// Vertices in counterclockwise order.
    fn vertices(&self) -> Vec<Xy> {
        self.inner.vertices().iter().map(|&p| xy(p)).collect()
    }

    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    /// One of "inside", "boundary", "outside".
    fn locate(&self, p: Xy) -> &'static str {
        match self.inner.contains(pt(p)) {
            Location::Inside => "inside",
            Location::Boundary => "boundary",
            Location::Outside => "outside",
        }
    }

    fn __len__(&self) -> usize {
        self.inner.vertices().len()
    }
}

#[pyclass(name = "Path", module = "ic_paths_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyPath {
    inner: PiecewisePath,
}

#[pymethods]
impl PyPath {
    #[staticmethod]
    fn from_points(points: Vec<Xy>) -> PyResult<Self> {
        let pts: Vec<Point> = points.into_iter().map(pt).collect();
        Ok(PyPath {
            inner: PiecewisePath::from_polyline(&pts).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPath {
            inner: serde_json::from_str(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("path serializes")
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn start(&self) -> Xy {
        xy(self.inner.start())
    }

    fn end(&self) -> Xy {
        xy(self.inner.end())
    }

    fn piece_count(&self) -> usize {
        self.inner.pieces().len()
    }

    fn reversed(&self) -> Self {
        PyPath {
            inner: self.inner.reverse(),
        }
    }

    /// Polyline within `delta` of the path.
    fn points(&self, delta: f64) -> Vec<Xy> {
        self.inner
            .flatten(delta)
            .into_iter()
            .map(|(_, p, _)| xy(p))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Path(pieces={}, length={})",
            self.inner.pieces().len(),
            self.inner.length()
        )
    }
}

#[pyclass(name = "Report", module = "ic_paths_py", skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyReport {
    property: String,
    passed: bool,
    worst_margin: f64,
    witness: Option<Vec<f64>>,
    samples_used: usize,
    tolerance: f64,
}

impl From<VerifyReport> for PyReport {
    fn from(r: VerifyReport) -> Self {
        PyReport {
            property: r.property.name().to_string(),
            passed: r.pass,
            worst_margin: r.worst_margin,
            witness: r.witness,
            samples_used: r.samples_used,
            tolerance: r.tolerance,
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "Report({}, passed={}, margin={:e})",
            self.property, self.passed, self.worst_margin
        )
    }
}

#[pyclass(name = "Result", module = "ic_paths_py")]
pub struct PyIcResult {
    inner: IcResult,
}

#[pymethods]
impl PyIcResult {
    /// "path", "infeasible_s_dead", "infeasible_t_dead" or
    /// "infeasible_disconnected".
    #[getter]
    fn status(&self) -> String {
        serde_json::to_value(self.inner.status)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }

    #[getter]
    fn path(&self) -> Option<PyPath> {
        self.inner.path.clone().map(|inner| PyPath { inner })
    }

    #[getter]
    fn length(&self) -> Option<f64> {
        self.inner.path.as_ref().map(PiecewisePath::length)
    }

    #[getter]
    fn reports(&self) -> Vec<PyReport> {
        self.inner.reports.iter().cloned().map(Into::into).collect()
    }

    /// Outlines of the regions of `s` and of `t`.
    fn region_outlines(&self) -> (Vec<Vec<Xy>>, Vec<Vec<Xy>>) {
        let f = |rs: &[ic_paths::dead_region::DeadRegion]| {
            rs.iter()
                .map(|r| r.outline().into_iter().map(xy).collect())
                .collect()
        };
        (f(&self.inner.regions.s), f(&self.inner.regions.t))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("result serializes")
    }
}

fn tolerances(poly: &SimplePolygon, tol: Option<f64>, delta: Option<f64>) -> Tolerances {
    let tol = tol.unwrap_or(Tolerances::for_polygon(poly).tol);
    Tolerances {
        tol,
        delta: delta.unwrap_or(tol),
    }
}

/// Shortest increasing-chords path from `s` to `t`.
#[pyfunction]
#[pyo3(signature = (polygon, s, t, tol=None, delta=None, n=VerifyConfig::DEFAULT_N))]
fn shortest_path(
    polygon: &PyPolygon,
    s: Xy,
    t: Xy,
    tol: Option<f64>,
    delta: Option<f64>,
    n: usize,
) -> PyResult<PyIcResult> {
    let tol = tolerances(&polygon.inner, tol, delta);
    let inner =
        shortest_increasing_chords_path_with(&polygon.inner, pt(s), pt(t), tol, n).map_err(err)?;
    Ok(PyIcResult { inner })
}

/// Plain shortest path, without the chords constraint.
#[pyfunction]
fn geodesic(polygon: &PyPolygon, s: Xy, t: Xy) -> PyResult<PyPath> {
    Ok(PyPath {
        inner: shortest_path_simple(&polygon.inner, pt(s), pt(t)).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (path, tol, n=VerifyConfig::DEFAULT_N))]
fn verify(path: &PyPath, tol: f64, n: usize) -> PyResult<Vec<PyReport>> {
    let reports = verify_all(&path.inner, VerifyConfig { n, tol }).map_err(err)?;
    Ok(reports.into_iter().map(Into::into).collect())
}

/// Chords check of the geodesic between two paths with shared endpoints.
#[pyfunction]
#[pyo3(signature = (p1, p2, tol, n=VerifyConfig::DEFAULT_N))]
fn geodesic_between(p1: &PyPath, p2: &PyPath, tol: f64, n: usize) -> PyResult<PyReport> {
    Ok(geodesic_between_check(&p1.inner, &p2.inner, n, tol)
        .map_err(err)?
        .into())
}

/// Outlines of the regions from which `anchor` cannot be reached.
#[pyfunction]
#[pyo3(signature = (polygon, anchor, tol=None))]
fn dead_regions(polygon: &PyPolygon, anchor: Xy, tol: Option<f64>) -> PyResult<Vec<Vec<Xy>>> {
    let tol = tol.unwrap_or(Tolerances::for_polygon(&polygon.inner).tol);
    let regions = build_dead_region(&polygon.inner, pt(anchor), tol).map_err(err)?;
    Ok(regions
        .iter()
        .map(|r| r.outline().into_iter().map(xy).collect())
        .collect())
}

/// Randomized search for a verified path; `None` when the budget runs out.
#[pyfunction]
#[pyo3(signature = (polygon, s, t, budget=1000, seed=SearchBudget::DEFAULT_SEED, max_length=None))]
fn search(
    polygon: &PyPolygon,
    s: Xy,
    t: Xy,
    budget: usize,
    seed: u64,
    max_length: Option<f64>,
) -> Option<PyPath> {
    let mut b = SearchBudget::new(budget, seed);
    b.max_length = max_length;
    falsification_search(&polygon.inner, pt(s), pt(t), b).map(|inner| PyPath { inner })
}

#[pyfunction]
fn render_svg(polygon: &PyPolygon, s: Xy, t: Xy, result: Option<&PyIcResult>) -> String {
    ic_paths::svg::render(
        polygon.inner.vertices(),
        pt(s),
        pt(t),
        result.map(|r| &r.inner),
    )
}

#[pymodule]
fn ic_paths_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolygon>()?;
    m.add_class::<PyPath>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyIcResult>()?;
    m.add_function(wrap_pyfunction!(shortest_path, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic_between, m)?)?;
    m.add_function(wrap_pyfunction!(dead_regions, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    Ok(())
}
