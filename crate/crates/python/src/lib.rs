//! Python bindings for `polylimit`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use polylimit::developing::{self, ConnectionField};
use polylimit::error::Error;
use polylimit::experiments::{self, GhCheckConfig, PolygonLimitConfig};
use polylimit::flat_surface;
use polylimit::polygon::{self, DistanceMode};
use polylimit::reflection::{self as refl, CoxeterData};
use polylimit::wang::{self, RadialGrid, SolverConfig};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for polylimit::error::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn vec3(v: &Vector3<f64>) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn rows3(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]])
}

/// The cubic differential `c·zⁿ dz³`.
#[pyclass(name = "CubicDifferential", frozen, from_py_object)]
#[derive(Clone)]
struct PyCubic(polylimit::CubicDifferential);

#[pymethods]
impl PyCubic {
    #[new]
    #[pyo3(signature = (n, phase = 0.0))]
    fn new(n: u32, phase: f64) -> Self {
        Self(polylimit::CubicDifferential::with_phase(n, phase))
    }

    /// The zero differential (the hyperbolic plane).
    #[staticmethod]
    fn zero() -> Self {
        Self(polylimit::CubicDifferential::zero())
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn scale(&self) -> Complex64 {
        self.0.scale()
    }

    fn is_zero_mode(&self) -> bool {
        self.0.is_zero_mode()
    }

    fn conjugate(&self) -> Self {
        Self(self.0.conjugate())
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        self.0.eval(z)
    }

    fn __repr__(&self) -> String {
        format!(
            "CubicDifferential(n={}, scale={})",
            self.0.n(),
            self.0.scale()
        )
    }
}

/// Radial solution `u` of Wang's equation on a disk.
#[pyclass(name = "ConformalFactor", frozen)]
struct PyConformal(wang::ConformalFactor);

#[pymethods]
impl PyConformal {
    #[getter]
    fn radius(&self) -> f64 {
        self.0.grid().r()
    }

    #[getter]
    fn nodes(&self) -> Vec<f64> {
        self.0.grid().nodes()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.0.iterations()
    }

    #[getter]
    fn residual_norm(&self) -> f64 {
        self.0.residual_norm()
    }

    /// Spline value of `u` at radius `rho`.
    fn value(&self, rho: f64) -> f64 {
        self.0.value(rho)
    }

    /// `|ψ|²_g` at every node.
    fn psi_norm_sq(&self) -> Vec<f64> {
        (0..=self.0.grid().m())
            .map(|k| self.0.psi_norm_sq_at(k))
            .collect()
    }

    fn center_estimate(&self) -> PyResult<f64> {
        wang::center_estimate(&self.0).py()
    }

    /// `u ≥ u_flat` at every node (`n ≥ 1`).
    fn above_flat(&self) -> PyResult<bool> {
        let flat = wang::ConformalFactor::flat_barrier(*self.0.cd(), *self.0.grid()).py()?;
        wang::comparison_check(&flat, &self.0).py()
    }

    fn connection(&self) -> PyResult<PyConnection> {
        Ok(PyConnection(developing::assemble_connection(&self.0).py()?))
    }
}

/// Solve Wang's equation for `cd` on the disk of radius `r` with `m` intervals.
#[pyfunction]
#[pyo3(signature = (cd, r, m = 512, tol = 1e-10))]
fn solve(cd: PyCubic, r: f64, m: usize, tol: f64) -> PyResult<PyConformal> {
    let grid = RadialGrid::new(r, m).py()?;
    let cfg = SolverConfig {
        tol,
        ..SolverConfig::default()
    };
    Ok(PyConformal(wang::solve(&cd.0, &grid, &cfg).py()?))
}

/// Flat connection assembled from a solution.
#[pyclass(name = "ConnectionField", frozen)]
struct PyConnection(ConnectionField);

#[pymethods]
impl PyConnection {
    /// Developing map at `z`, a vector in ℝ³.
    fn develop(&self, z: Complex64) -> PyResult<[f64; 3]> {
        Ok(vec3(&developing::develop(&self.0, z).py()?))
    }

    fn develop_dual(&self, z: Complex64) -> PyResult<[f64; 3]> {
        Ok(vec3(&developing::develop_dual(&self.0, z).py()?))
    }

    /// Images of `k` equally spaced points on the circle of radius `rho`.
    fn develop_boundary(&self, rho: f64, k: usize) -> PyResult<Vec<[f64; 3]>> {
        Ok(developing::develop_boundary(&self.0, rho, k)
            .py()?
            .iter()
            .map(vec3)
            .collect())
    }

    /// Transport matrix along the segment from 0 to `z`.
    fn transport(&self, z: Complex64) -> PyResult<[[f64; 3]; 3]> {
        let t = developing::transport(&self.0, z, self.0.default_steps(z)).py()?;
        Ok(rows3(&t.t))
    }

    fn loop_holonomy(
        &self,
        vertices: Vec<Complex64>,
        steps_per_edge: usize,
    ) -> PyResult<[[f64; 3]; 3]> {
        Ok(rows3(
            &developing::loop_holonomy(&self.0, &vertices, steps_per_edge).py()?,
        ))
    }

    fn reality_residual(&self, z: Complex64) -> PyResult<f64> {
        self.0.reality_residual(z).py()
    }

    #[pyo3(signature = (z, delta = 1e-4))]
    fn flatness_residual(&self, z: Complex64, delta: f64) -> PyResult<f64> {
        self.0.flatness_residual(z, delta).py()
    }
}

/// Properly convex domain sampled in an affine chart.
#[pyclass(name = "ConvexDomain", frozen, from_py_object)]
#[derive(Clone)]
struct PyDomain(polygon::ConvexDomain);

#[pymethods]
impl PyDomain {
    /// Hull of chart points in the standard chart.
    #[staticmethod]
    #[pyo3(signature = (points, samples = 720))]
    fn from_points(points: Vec<[f64; 2]>, samples: usize) -> PyResult<Self> {
        Ok(Self(
            polygon::ConvexDomain::from_chart_points(Matrix3::identity(), &points, samples).py()?,
        ))
    }

    /// Projective hull of vectors in ℝ³ with positive third coordinate.
    #[staticmethod]
    fn from_lifts(lifts: Vec<[f64; 3]>) -> PyResult<Self> {
        let v: Vec<Vector3<f64>> = lifts.iter().map(|p| Vector3::from(*p)).collect();
        Ok(Self(polygon::projectivize(&v).py()?))
    }

    #[getter]
    fn hull_vertices(&self) -> Vec<[f64; 2]> {
        self.0.hull_vertices().to_vec()
    }

    #[getter]
    fn boundary(&self) -> Vec<[f64; 2]> {
        self.0.boundary().to_vec()
    }

    fn centroid(&self) -> [f64; 2] {
        self.0.centroid()
    }

    fn diameter(&self) -> f64 {
        self.0.diameter()
    }

    /// Chart Hausdorff distance to `other`.
    fn hausdorff(&self, other: &PyDomain) -> PyResult<f64> {
        polygon::hausdorff_distance(&self.0, &other.0, DistanceMode::Chart).py()
    }

    /// Number of corners turning by more than `angle_deg`.
    #[pyo3(signature = (angle_deg = 10.0))]
    fn dominant_vertices(&self, angle_deg: f64) -> usize {
        polygon::dominant_vertices(&self.0, angle_deg.to_radians())
    }

    fn dual(&self) -> PyResult<Self> {
        Ok(Self(polygon::dual_domain(&self.0).py()?))
    }

    fn __len__(&self) -> usize {
        self.0.hull_vertices().len()
    }
}

/// Developed image of the circle of radius `rho` for `zⁿ dz³` on the disk
/// of radius `r`.
#[pyfunction]
#[pyo3(signature = (n, r, rho, samples = 720, m = 2048))]
fn developed_domain(n: u32, r: f64, rho: f64, samples: usize, m: usize) -> PyResult<PyDomain> {
    let cf = experiments::solve_disk(n, r, m).py()?;
    let conn = developing::assemble_connection(&cf).py()?;
    let lifts = developing::develop_boundary(&conn, rho, samples).py()?;
    Ok(PyDomain(
        polygon::projectivize_with_samples(&lifts, samples).py()?,
    ))
}

/// Tiling of a triangle-group orbit.
#[pyclass(name = "Tiling", frozen)]
struct PyTiling {
    tiling: refl::Tiling,
    hull: polygon::ConvexDomain,
}

#[pymethods]
impl PyTiling {
    fn __len__(&self) -> usize {
        self.tiling.len()
    }

    /// Tiles per word length.
    fn length_counts(&self) -> Vec<usize> {
        self.tiling.length_counts()
    }

    fn words(&self) -> Vec<String> {
        self.tiling.tiles.iter().map(|t| t.word_string()).collect()
    }

    /// Tile triangles in the standard chart.
    fn triangles(&self) -> PyResult<Vec<[[f64; 2]; 3]>> {
        self.tiling.chart_triangles().py()
    }

    #[getter]
    fn hull(&self) -> PyDomain {
        PyDomain(self.hull.clone())
    }

    fn max_overlap(&self) -> PyResult<f64> {
        self.tiling.max_pairwise_overlap().py()
    }

    /// Largest Gauss–Bonnet residual over `count` random disk patches.
    #[pyo3(signature = (count = 100, size = 40, seed = 1))]
    fn gauss_bonnet(&self, count: usize, size: usize, seed: u64) -> PyResult<i64> {
        Ok(experiments::gb_check(&self.tiling, count, size, seed)
            .py()?
            .max_abs_residual)
    }
}

/// Orbit of the fundamental triangle of the `(a, b, c)` group with cubic
/// parameter `s`, out to word length `depth`.
#[pyfunction]
#[pyo3(signature = (a, b, c, s = 0.0, depth = 8))]
fn tits_tiling(a: u32, b: u32, c: u32, s: f64, depth: usize) -> PyResult<PyTiling> {
    let (tiling, hull) =
        experiments::tits_tiling(&CoxeterData::new(a, b, c, s).py()?, depth).py()?;
    Ok(PyTiling { tiling, hull })
}

/// Generators of the reflection group as 3×3 matrices.
#[pyfunction]
#[pyo3(signature = (a, b, c, s = 0.0))]
fn reflections(a: u32, b: u32, c: u32, s: f64) -> PyResult<Vec<[[f64; 3]; 3]>> {
    let rs =
        refl::build_reflections(&refl::cartan_family(&CoxeterData::new(a, b, c, s).py()?)).py()?;
    Ok((0..3).map(|i| rows3(rs.sigma(i))).collect())
}

/// Corner index of a boundary angle of a flat patch.
#[pyfunction]
fn corner_index(angle: f64) -> PyResult<i32> {
    flat_surface::corner_index(angle).py()
}

/// One dict per radius of the developed-polygon convergence run.
#[pyfunction]
#[pyo3(signature = (n, radii, nodes_per_unit = 256.0, extrapolate = true))]
fn polygon_limit<'py>(
    py: Python<'py>,
    n: u32,
    radii: Vec<f64>,
    nodes_per_unit: f64,
    extrapolate: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut cfg = PolygonLimitConfig::new(n, radii);
    cfg.nodes_per_unit = nodes_per_unit;
    cfg.extrapolate = extrapolate;
    let out = py.detach(|| experiments::polygon_limit(&cfg)).py()?;
    out.rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("r", row.r)?;
            d.set_item("flat_radius", row.flat_radius)?;
            d.set_item("vertex_count", row.vertex_count)?;
            d.set_item("hausdorff_to_reference", row.hausdorff_to_reference)?;
            d.set_item("regular_distance", row.regular_distance)?;
            Ok(d)
        })
        .collect()
}

/// `(s, k, distance)` of normalized hulls to regular `k`-gons.
#[pyfunction]
#[pyo3(signature = (a, b, c, s_list, depth = 10))]
fn limit_c(
    py: Python<'_>,
    a: u32,
    b: u32,
    c: u32,
    s_list: Vec<f64>,
    depth: usize,
) -> PyResult<Vec<(f64, u32, f64)>> {
    let rows = py
        .detach(|| experiments::limit_c(a, b, c, &s_list, depth))
        .py()?;
    Ok(rows.iter().map(|r| (r.s, r.k, r.distance)).collect())
}

/// `(r, discrepancy)` between the metrics at `r` and `2r`.
#[pyfunction]
#[pyo3(signature = (n, radii, points = 20, seed = 7))]
fn gh_check(
    py: Python<'_>,
    n: u32,
    radii: Vec<f64>,
    points: usize,
    seed: u64,
) -> PyResult<Vec<(f64, f64)>> {
    let mut cfg = GhCheckConfig::new(n, radii);
    cfg.points = points;
    cfg.seed = seed;
    let out = py.detach(|| experiments::gh_check(&cfg)).py()?;
    Ok(out.rows.iter().map(|r| (r.r, r.discrepancy)).collect())
}

#[pymodule]
fn polylimit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCubic>()?;
    m.add_class::<PyConformal>()?;
    m.add_class::<PyConnection>()?;
    m.add_class::<PyDomain>()?;
    m.add_class::<PyTiling>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(developed_domain, m)?)?;
    m.add_function(wrap_pyfunction!(tits_tiling, m)?)?;
    m.add_function(wrap_pyfunction!(reflections, m)?)?;
    m.add_function(wrap_pyfunction!(corner_index, m)?)?;
    m.add_function(wrap_pyfunction!(polygon_limit, m)?)?;
    m.add_function(wrap_pyfunction!(limit_c, m)?)?;
    m.add_function(wrap_pyfunction!(gh_check, m)?)?;
    Ok(())
}
