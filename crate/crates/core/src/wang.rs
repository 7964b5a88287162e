//! Radial solver for Wang's equation `Δu = 2(eᵘ − 2|ψ|²e⁻²ᵘ)` on a disk.
//!
//! With `ψ = zⁿdz³` the complete solution is radial, so the PDE reduces to
//! `u″ + u′/ρ = 2(eᵘ − 2ρ²ⁿe⁻²ᵘ)` with `u′(0) = 0`. The truncated problem on
//! `B(0, r)` uses the flat value `u_flat(r)` as Dirichlet data.

use serde::{Deserialize, Serialize};

use crate::cubic::{flat_radius, CubicDifferential};
use crate::error::{Error, Result};
use crate::spline::{solve_tridiagonal, UniformSpline};

/// In zero mode the evaluation disk has radius `0.9` times the radius of the
/// Poincaré disk whose metric supplies the boundary data.
pub const ZERO_MODE_FRACTION: f64 = 0.9;

/// Absolute slack used by the ordering checks.
pub const ORDER_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    r: f64,
    m: usize,
}

impl RadialGrid {
    pub fn new(r: f64, m: usize) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "disk radius must be positive, got {r}"
            )));
        }
        if m < 64 {
            return Err(Error::InvalidParameter(format!(
                "need at least 64 radial samples, got {m}"
            )));
        }
        Ok(Self { r, m })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Index of the last node; there are `m + 1` nodes.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        self.r / self.m as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.m {
            self.r
        } else {
            k as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.m).map(|k| self.node(k)).collect()
    }

    pub fn nearest(&self, rho: f64) -> usize {
        ((rho / self.h()).round().max(0.0) as usize).min(self.m)
    }
}

/// Starting guess for Newton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Initializer {
    /// `u_flat`, clamped to its value at `ρ = 1` inside the unit disk.
    Flat,
    /// A Poincaré profile of a disk twice as large, shifted to match the
    /// boundary value.
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    pub initializer: Initializer,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            damping: 1.0,
            initializer: Initializer::Flat,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// `ln(4R²/(R²−ρ²)²)`, the log-density of the complete curvature −1 metric on `B(0, R)`.
pub fn poincare_log_density(big_r: f64, rho: f64) -> f64 {
    let d = big_r * big_r - rho * rho;
    (4.0 * big_r * big_r / (d * d)).ln()
}

/// Log-density of the flat solution `(2|ψ|²)^{1/3}|dz|²`. Infinite at `ρ = 0` when `n ≥ 1`.
pub fn flat_log_density(n: u32, rho: f64) -> f64 {
    if n == 0 {
        return std::f64::consts::LN_2 / 3.0;
    }
    std::f64::consts::LN_2 / 3.0 + (2.0 * n as f64 / 3.0) * rho.ln()
}

/// Dirichlet value at radius `rho`.
///
/// For a nonzero differential this is `u_flat(ρ)`. In zero mode `rho` is read
/// as the evaluation radius `r′` and the value is the Poincaré log-density of
/// the disk of radius `r′ / ZERO_MODE_FRACTION`.
pub fn boundary_condition(cd: &CubicDifferential, rho: f64) -> Result<f64> {
    if cd.is_zero_mode() {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!(
                "zero-mode boundary radius must be positive, got {rho}"
            )));
        }
        return Ok(poincare_log_density(rho / ZERO_MODE_FRACTION, rho));
    }
    if cd.n() >= 1 && !(rho > 0.0) {
        return Err(Error::Domain(format!(
            "u_flat has a log singularity at ρ = {rho}"
        )));
    }
    if cd.n() == 0 && rho < 0.0 {
        return Err(Error::Domain(format!("negative radius {rho}")));
    }
    Ok(flat_log_density(cd.n(), rho))
}

// right-hand side F(u, ρ) and its u-derivative
fn rhs(cd: &CubicDifferential, u: f64, rho: f64) -> (f64, f64) {
    let p = cd.abs_sq_at_radius(rho);
    let eu = u.exp();
    let e2 = (-2.0 * u).exp();
    (2.0 * eu - 4.0 * p * e2, 2.0 * eu + 8.0 * p * e2)
}

/// Discretized log conformal factor `u` with `g = eᵘ|dz|²`.
#[derive(Debug, Clone)]
pub struct ConformalFactor {
    grid: RadialGrid,
    u: Vec<f64>,
    // u minus the reference profile
    v: Vec<f64>,
    cd: CubicDifferential,
    residual_norm: f64,
    iterations: usize,
    tol: f64,
    accepted: bool,
    spline: UniformSpline,
}

impl ConformalFactor {
    fn from_split(
        cd: CubicDifferential,
        grid: RadialGrid,
        w: &[f64],
        v: Vec<f64>,
        tol: f64,
        iterations: usize,
    ) -> Self {
        let residual_norm = sup(&residual(&cd, &grid, w, &v));
        let u: Vec<f64> = w.iter().zip(&v).map(|(a, b)| a + b).collect();
        let spline = build_spline(&grid, &u);
        Self {
            grid,
            u,
            v,
            cd,
            residual_norm,
            iterations,
            tol,
            accepted: residual_norm <= tol,
            spline,
        }
    }

    /// Builds a profile from caller-supplied nodal values, e.g. for comparison
    /// checks. Not marked accepted unless its residual meets `tol`.
    pub fn from_nodal_values(
        cd: CubicDifferential,
        grid: RadialGrid,
        u: Vec<f64>,
        tol: f64,
    ) -> Result<Self> {
        if u.len() != grid.m() + 1 {
            return Err(Error::GridMismatch(format!(
                "expected {} nodal values, got {}",
                grid.m() + 1,
                u.len()
            )));
        }
        let (w, v) = split(&cd, &grid, &u);
        Ok(Self::from_split(cd, grid, &w, v, tol, 0))
    }

    /// The flat barrier `u_flat` sampled on `grid`. Its value at `ρ = 0` is
    /// `−∞` when `n ≥ 1`, so it is never an accepted solution.
    pub fn flat_barrier(cd: CubicDifferential, grid: RadialGrid) -> Result<Self> {
        if cd.is_zero_mode() {
            return Err(Error::UndefinedMetric);
        }
        let u: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&rho| flat_log_density(cd.n(), rho))
            .collect();
        let spline = build_spline(&grid, &u.iter().map(|v| v.max(-1e300)).collect::<Vec<_>>());
        let (_, v) = split(&cd, &grid, &u);
        Ok(Self {
            grid,
            u,
            v,
            cd,
            residual_norm: f64::INFINITY,
            iterations: 0,
            tol: 0.0,
            accepted: false,
            spline,
        })
    }

    /// `u + ln c`, i.e. the metric `c·g`. A supersolution for `c ≥ 1` and a
    /// subsolution for `c ≤ 1`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale must be positive, got {c}"
            )));
        }
        let lc = c.ln();
        let (w, _) = split(&self.cd, &self.grid, &self.u);
        let v: Vec<f64> = self.v.iter().map(|x| x + lc).collect();
        let mut out = Self::from_split(self.cd, self.grid, &w, v, self.tol, 0);
        out.accepted = false;
        Ok(out)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn cd(&self) -> &CubicDifferential {
        &self.cd
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_accepted(&self) -> bool {
        self.accepted
    }

    /// Interpolated `u(ρ)`.
    pub fn value(&self, rho: f64) -> f64 {
        self.spline.value(rho)
    }

    /// Interpolated `u′(ρ)`.
    pub fn derivative(&self, rho: f64) -> f64 {
        self.spline.derivative(rho)
    }

    /// Discrete Laplacian of the radial profile at node `k`.
    pub fn discrete_laplacian(&self, k: usize) -> f64 {
        let h = self.grid.h();
        let u = &self.u;
        let m = self.grid.m();
        if k < m {
            split_laplacian(&self.cd, &self.grid, &self.v, k)
        } else {
            let d2 = (2.0 * u[m] - 5.0 * u[m - 1] + 4.0 * u[m - 2] - u[m - 3]) / (h * h);
            let d1 = (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * h);
            d2 + d1 / self.grid.r()
        }
    }

    /// `‖ψ‖²_g = |ψ|²e⁻³ᵘ` at node `k`.
    pub fn psi_norm_sq_at(&self, k: usize) -> f64 {
        self.cd.abs_sq_at_radius(self.grid.node(k)) * (-3.0 * self.u[k]).exp()
    }

    /// Residual of Wang's equation in the undiscretized form
    /// `κ + 1 − 2‖ψ‖²`, at every node except the boundary.
    pub fn curvature_defect(&self) -> f64 {
        (0..self.grid.m())
            .map(|k| {
                let (kappa, psi) = pointwise_wang(self, self.grid.node(k));
                (kappa + 1.0 - 2.0 * psi).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn build_spline(grid: &RadialGrid, u: &[f64]) -> UniformSpline {
    let h = grid.h();
    let m = grid.m();
    let d1 = (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * h);
    UniformSpline::clamped(h, u, 0.0, d1)
}

/// Smooth reference profile `(n/3)·ln(1+ρ²)`, asymptotic to `u_flat` up to a
/// constant. The solver works with `v = u − w`, whose magnitude stays small,
/// so the discrete Laplacian does not lose digits to cancellation.
fn reference(cd: &CubicDifferential, rho: f64) -> f64 {
    if cd.is_zero_mode() {
        0.0
    } else {
        cd.n() as f64 / 3.0 * (rho * rho).ln_1p()
    }
}

// discrete Laplacian of the reference profile, evaluated without cancellation
fn reference_laplacian(cd: &CubicDifferential, grid: &RadialGrid, k: usize) -> f64 {
    if cd.is_zero_mode() || cd.n() == 0 {
        return 0.0;
    }
    let c = cd.n() as f64 / 3.0;
    let h = grid.h();
    if k == 0 {
        return 4.0 * c * (h * h).ln_1p() / (h * h);
    }
    let rho = grid.node(k);
    let q = 1.0 + rho * rho;
    let second = (h * h * (2.0 - 2.0 * rho * rho + h * h) / (q * q)).ln_1p() / (h * h);
    let first = (4.0 * rho * h / (1.0 + (rho - h) * (rho - h))).ln_1p() / (2.0 * h * rho);
    c * (second + first)
}

fn split(cd: &CubicDifferential, grid: &RadialGrid, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let w: Vec<f64> = grid.nodes().iter().map(|&rho| reference(cd, rho)).collect();
    let v = u.iter().zip(&w).map(|(a, b)| a - b).collect();
    (w, v)
}

// discrete Laplacian of u = w + v at node k < m
fn split_laplacian(cd: &CubicDifferential, grid: &RadialGrid, v: &[f64], k: usize) -> f64 {
    let h = grid.h();
    let lap_v = if k == 0 {
        4.0 * (v[1] - v[0]) / (h * h)
    } else {
        let rho = grid.node(k);
        (v[k + 1] - 2.0 * v[k] + v[k - 1]) / (h * h) + (v[k + 1] - v[k - 1]) / (2.0 * h * rho)
    };
    lap_v + reference_laplacian(cd, grid, k)
}

// discrete residual at the unknown nodes 0..m-1; the last entry of v is the Dirichlet value
fn residual(cd: &CubicDifferential, grid: &RadialGrid, w: &[f64], v: &[f64]) -> Vec<f64> {
    (0..grid.m())
        .map(|k| split_laplacian(cd, grid, v, k) - rhs(cd, w[k] + v[k], grid.node(k)).0)
        .collect()
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(
        0.0f64,
        |a, &b| if b.is_nan() { f64::NAN } else { a.max(b.abs()) },
    )
}

fn initial_guess(
    cd: &CubicDifferential,
    grid: &RadialGrid,
    init: Initializer,
    boundary: f64,
) -> Vec<f64> {
    let r = grid.r();
    grid.nodes()
        .iter()
        .map(|&rho| match (init, cd.is_zero_mode()) {
            (Initializer::Flat, true) => boundary,
            (Initializer::Flat, false) => flat_log_density(cd.n(), rho.max(1.0)),
            (Initializer::Hyperbolic, _) => {
                poincare_log_density(2.0 * r, rho) - poincare_log_density(2.0 * r, r) + boundary
            }
        })
        .collect()
}

// Newton direction from the tridiagonal Jacobian (an M-matrix up to sign)
fn newton_direction(
    cd: &CubicDifferential,
    grid: &RadialGrid,
    w: &[f64],
    v: &[f64],
    g: &[f64],
) -> Vec<f64> {
    let m = grid.m();
    let h = grid.h();
    let mut a = vec![0.0; m];
    let mut b = vec![0.0; m];
    let mut c = vec![0.0; m];
    let d: Vec<f64> = g.iter().map(|x| -x).collect();
    b[0] = -4.0 / (h * h) - rhs(cd, w[0] + v[0], 0.0).1;
    c[0] = 4.0 / (h * h);
    for k in 1..m {
        let rho = grid.node(k);
        a[k] = 1.0 / (h * h) - 1.0 / (2.0 * h * rho);
        b[k] = -2.0 / (h * h) - rhs(cd, w[k] + v[k], rho).1;
        c[k] = 1.0 / (h * h) + 1.0 / (2.0 * h * rho);
    }
    solve_tridiagonal(&a, &b, &c, &d)
}

fn add_scaled(v: &[f64], delta: &[f64], step: f64) -> Vec<f64> {
    v.iter()
        .enumerate()
        .map(|(k, &x)| {
            if k < delta.len() {
                x + step * delta[k]
            } else {
                x
            }
        })
        .collect()
}

/// Newton solve of the radial boundary value problem.
pub fn solve(
    cd: &CubicDifferential,
    grid: &RadialGrid,
    config: &SolverConfig,
) -> Result<ConformalFactor> {
    config.validate()?;
    let boundary = boundary_condition(cd, grid.r())?;
    let m = grid.m();
    let mut u0 = initial_guess(cd, grid, config.initializer, boundary);
    u0[m] = boundary;
    let (w, mut u) = split(cd, grid, &u0);
    let tol = effective_tol(config.tol, grid, &u0);

    let mut g = residual(cd, grid, &w, &u);
    let mut norm = sup(&g);
    let mut iterations = 0;
    while !(norm <= tol) {
        if iterations >= config.max_iter || !norm.is_finite() {
            return Err(Error::NoConvergence {
                iterations,
                residual: norm,
            });
        }
        iterations += 1;
        let delta = newton_direction(cd, grid, &w, &u, &g);
        // damped step with backtracking on the residual
        let mut step = config.damping;
        loop {
            let trial = add_scaled(&u, &delta, step);
            let gt = residual(cd, grid, &w, &trial);
            let nt = sup(&gt);
            if nt.is_finite() && (nt < norm || step < 1e-3 || nt <= tol) {
                u = trial;
                g = gt;
                norm = nt;
                break;
            }
            step *= 0.5;
        }
    }
    // one undamped polishing step, kept only if it helps
    let delta = newton_direction(cd, grid, &w, &u, &g);
    let trial = add_scaled(&u, &delta, 1.0);
    if sup(&residual(cd, grid, &w, &trial)) < norm {
        u = trial;
    }
    Ok(ConformalFactor::from_split(
        *cd, *grid, &w, u, tol, iterations,
    ))
}

/// `tol`, raised to the round-off floor of the discrete Laplacian, about
/// `ε·|u|/h²`, on fine grids.
pub fn effective_tol(tol: f64, grid: &RadialGrid, u: &[f64]) -> f64 {
    let h = grid.h();
    let scale = 1.0
        + u.iter().fold(
            0.0f64,
            |a, &b| if b.is_finite() { a.max(b.abs()) } else { a },
        );
    tol.max(16.0 * f64::EPSILON * scale / (h * h))
}

/// Curvature `κ = −½e⁻ᵘΔu` (discrete) and `‖ψ‖²_g` at the node nearest `rho`.
pub fn pointwise_wang(cf: &ConformalFactor, rho: f64) -> (f64, f64) {
    let k = cf.grid.nearest(rho);
    let kappa = -0.5 * (-cf.u[k]).exp() * cf.discrete_laplacian(k);
    (kappa, cf.psi_norm_sq_at(k))
}

/// Whether `cf_super ≥ cf_sub − ORDER_EPS` at every node.
pub fn comparison_check(cf_sub: &ConformalFactor, cf_super: &ConformalFactor) -> Result<bool> {
    if cf_sub.grid != cf_super.grid {
        return Err(Error::GridMismatch(format!(
            "({}, {}) vs ({}, {})",
            cf_sub.grid.r, cf_sub.grid.m, cf_super.grid.r, cf_super.grid.m
        )));
    }
    Ok(cf_sub
        .u
        .iter()
        .zip(&cf_super.u)
        .all(|(&lo, &hi)| hi >= lo - ORDER_EPS))
}

/// Index of the node at flat distance closest to half the flat radius of
/// the disk, i.e. the node farthest from both `0` and `∂B`.
pub fn center_node(cf: &ConformalFactor) -> usize {
    let n = cf.cd.n();
    let total = flat_radius(n, cf.grid.r()).unwrap_or(0.0);
    (0..=cf.grid.m())
        .max_by(|&i, &j| {
            let score = |k: usize| {
                let d = flat_radius(n, cf.grid.node(k)).unwrap_or(0.0);
                d.min(total - d)
            };
            score(i).total_cmp(&score(j)).then(j.cmp(&i))
        })
        .unwrap_or(0)
}

/// `2‖ψ‖²_g` at [`center_node`].
pub fn center_estimate(cf: &ConformalFactor) -> Result<f64> {
    if cf.cd.is_zero_mode() {
        return Err(Error::UndefinedMetric);
    }
    Ok(2.0 * cf.psi_norm_sq_at(center_node(cf)))
}

/// `2‖ψ‖²_g` at the node nearest `rho`.
pub fn curvature_ratio_at(cf: &ConformalFactor, rho: f64) -> f64 {
    2.0 * cf.psi_norm_sq_at(cf.grid.nearest(rho))
}

/// Solves the full two-dimensional equation on the square `[−a, a]²` with a
/// five-point Laplacian and nonlinear SOR, taking Dirichlet data from the
/// radial solution. Returns the sup deviation from the radial profile at the
/// grid nodes.
pub fn verify_radial_2d(cf: &ConformalFactor, half_width: f64, cells: usize) -> Result<f64> {
    if !(half_width > 0.0) || half_width * std::f64::consts::SQRT_2 >= cf.grid.r() {
        return Err(Error::OutsideRegion(format!(
            "square of half-width {half_width} does not fit in B(0, {})",
            cf.grid.r()
        )));
    }
    if cells < 4 {
        return Err(Error::InvalidParameter("need at least 4 cells".into()));
    }
    let n = cells + 1;
    let h = 2.0 * half_width / cells as f64;
    let coord = |i: usize| -half_width + i as f64 * h;
    let radius = |i: usize, j: usize| coord(i).hypot(coord(j));
    let exact: Vec<f64> = (0..n * n)
        .map(|idx| cf.value(radius(idx / n, idx % n)))
        .collect();
    let mut u = exact.clone();
    // start interior from a constant to make the check non-trivial
    let mean = exact.iter().sum::<f64>() / exact.len() as f64;
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            u[i * n + j] = mean;
        }
    }
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / cells as f64).sin());
    let h2 = h * h;
    for _sweep in 0..20_000 {
        let mut change = 0.0f64;
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let idx = i * n + j;
                let nb = u[idx - n] + u[idx + n] + u[idx - 1] + u[idx + 1];
                let (f, fu) = rhs(&cf.cd, u[idx], radius(i, j));
                // one Newton step on the local equation (nb − 4u)/h² = F(u)
                let res = (nb - 4.0 * u[idx]) / h2 - f;
                let jac = -4.0 / h2 - fu;
                let du = -omega * res / jac;
                u[idx] += du;
                change = change.max(du.abs());
            }
        }
        if change < 1e-13 {
            return Ok(u
                .iter()
                .zip(&exact)
                .fold(0.0, |acc, (a, b)| acc.max((a - b).abs())));
        }
    }
    Err(Error::NoConvergence {
        iterations: 20_000,
        residual: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_default(cd: CubicDifferential, r: f64, m: usize) -> ConformalFactor {
        solve(
            &cd,
            &RadialGrid::new(r, m).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn boundary_examples() {
        let third = std::f64::consts::LN_2 / 3.0;
        assert!(
            (boundary_condition(&CubicDifferential::new(0), 3.3).unwrap() - third).abs() < 1e-15
        );
        assert!((third - 0.2310491).abs() < 1e-7);
        assert!(
            (boundary_condition(&CubicDifferential::new(1), 1.0).unwrap() - third).abs() < 1e-15
        );
        let e = std::f64::consts::E;
        let v = boundary_condition(&CubicDifferential::new(1), e).unwrap();
        assert!((v - third - 2.0 / 3.0).abs() < 1e-14);
        assert!(boundary_condition(&CubicDifferential::new(2), 0.0).is_err());
    }

    #[test]
    fn grid_and_config_validation() {
        assert!(RadialGrid::new(1.0, 63).is_err());
        assert!(RadialGrid::new(0.0, 100).is_err());
        let g = RadialGrid::new(2.0, 64).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(64), 2.0);
        let bad = SolverConfig {
            tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn n0_is_constant() {
        let cf = solve_default(CubicDifferential::new(0), 6.0, 512);
        let third = std::f64::consts::LN_2 / 3.0;
        assert!(cf.values().iter().all(|v| (v - third).abs() < 1e-8));
        let (kappa, psi) = pointwise_wang(&cf, 2.5);
        assert!(kappa.abs() < 1e-8 && (psi - 0.5).abs() < 1e-8);
        assert!((center_estimate(&cf).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_mode_matches_poincare() {
        let cf = solve_default(CubicDifferential::zero(), 1.8, 256);
        let big_r = 2.0;
        let err = cf
            .grid()
            .nodes()
            .iter()
            .zip(cf.values())
            .map(|(&rho, &u)| (u - poincare_log_density(big_r, rho)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "err {err}");
        let (kappa, psi) = pointwise_wang(&cf, 0.7);
        assert!((kappa + 1.0).abs() < 1e-3 && psi == 0.0);
    }

    #[test]
    fn n1_center_is_hyperbolic() {
        let cf = solve_default(CubicDifferential::new(1), 4.0, 512);
        let (kappa, psi) = pointwise_wang(&cf, 0.0);
        assert!((kappa + 1.0).abs() < 1e-8);
        assert_eq!(psi, 0.0);
        assert_eq!(curvature_ratio_at(&cf, 0.0), 0.0);
    }

    #[test]
    fn scaled_solutions_are_ordered() {
        let cf = solve_default(CubicDifferential::new(2), 4.0, 256);
        assert!(comparison_check(&cf, &cf).unwrap());
        assert!(comparison_check(&cf, &cf.scaled(1.5).unwrap()).unwrap());
        assert!(!comparison_check(&cf.scaled(1.5).unwrap(), &cf).unwrap());
        let other = solve_default(CubicDifferential::new(2), 4.0, 128);
        assert!(matches!(
            comparison_check(&cf, &other),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn initializers_agree() {
        let cd = CubicDifferential::new(2);
        let grid = RadialGrid::new(5.0, 400).unwrap();
        let a = solve(&cd, &grid, &SolverConfig::default()).unwrap();
        let b = solve(
            &cd,
            &grid,
            &SolverConfig {
                initializer: Initializer::Hyperbolic,
                damping: 0.7,
                ..Default::default()
            },
        )
        .unwrap();
        let diff = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff <= 10.0 * 1e-10, "diff {diff}");
    }

    #[test]
    fn two_dimensional_check_is_second_order() {
        let cf = solve_default(CubicDifferential::new(1), 4.0, 2048);
        let e1 = verify_radial_2d(&cf, 1.5, 24).unwrap();
        let e2 = verify_radial_2d(&cf, 1.5, 48).unwrap();
        assert!(e1 < 1e-2);
        let ratio = e1 / e2;
        assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio}");
    }
}
