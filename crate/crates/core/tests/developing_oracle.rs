//! Transport against closed forms: a matrix exponential when the connection
//! is constant, and the hyperboloid when ψ = 0.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use polylimit::developing::{assemble_connection, develop, develop_dual, loop_holonomy, transport};
use polylimit::wang::{solve, RadialGrid, SolverConfig};
use polylimit::CubicDifferential;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

/// `exp(M)` by scaling and squaring of a Taylor series, computed
/// independently of the RK4 integrator.
fn expm(m: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = m.amax() * 3.0;
    let k = (norm.log2().ceil().max(0.0) as u32) + 4;
    let a = m / 2f64.powi(k as i32);
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for j in 1..30 {
        term = term * a / j as f64;
        sum += term;
    }
    for _ in 0..k {
        sum = sum * sum;
    }
    sum
}

#[test]
fn flat_transport_is_a_matrix_exponential() {
    let cf = solve(
        &CubicDifferential::new(0),
        &RadialGrid::new(6.0, 512).unwrap(),
        &SolverConfig::default(),
    )
    .unwrap();
    let conn = assemble_connection(&cf).unwrap();
    for (x, y) in [(1.0, 0.0), (0.3, -2.1), (-3.0, 2.5), (0.0, 4.9)] {
        let z = c(x, y);
        let (ax, ay) = conn.coefficients(z).unwrap();
        let rho = z.norm();
        let exact = expm(&((ax * (x / rho) + ay * (y / rho)) * rho));
        let t = transport(&conn, z, conn.default_steps(z)).unwrap();
        let err = (t.t - exact).amax() / exact.amax();
        assert!(err < 1e-9, "z = {z}: {err:e}");
        // the dual solves the adjoint equation, so it is T^{-T}
        let dual_err = (t.dual - exact.try_inverse().unwrap().transpose()).amax();
        assert!(dual_err / t.dual.amax() < 1e-9, "{dual_err:e}");
    }
}

/// The discrete `u` solves the equation only up to `O(h²)`, so the curvature
/// of the assembled connection, and with it the holonomy, is `O(h²)`.
#[test]
fn loop_holonomy_vanishes_at_second_order() {
    let around = [c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)];
    let defect = |m: usize, lp: &[Complex64]| {
        let cf = solve(
            &CubicDifferential::new(2),
            &RadialGrid::new(4.0, m).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap();
        let conn = assemble_connection(&cf).unwrap();
        (loop_holonomy(&conn, lp, 800).unwrap() - Matrix3::identity()).amax()
    };
    let (coarse, fine) = (defect(1024, &around), defect(2048, &around));
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "{coarse:e} / {fine:e}");
    let triangle = [c(0.0, 0.0), c(2.0, 0.0), c(0.0, 2.0)];
    assert!(defect(4096, &triangle) < 1e-6);
}

#[test]
fn zero_mode_develops_onto_the_hyperboloid() {
    let cf = solve(
        &CubicDifferential::zero(),
        &RadialGrid::new(3.0, 512).unwrap(),
        &SolverConfig::default(),
    )
    .unwrap();
    let conn = assemble_connection(&cf).unwrap();
    for (x, y) in [(0.5, 0.0), (1.0, 1.0), (-2.0, 0.7), (0.1, -2.6)] {
        let f = develop(&conn, c(x, y)).unwrap();
        let q = f[2] * f[2] - f[0] * f[0] - f[1] * f[1];
        assert!(
            (q - 1.0).abs() < 1e-6 * f.norm_squared(),
            "z = ({x}, {y}): q = {q}"
        );
        // the dual of the hyperboloid is the hyperboloid, with ⟨f*, f⟩ = 1
        let g = develop_dual(&conn, c(x, y)).unwrap();
        assert!((g.dot(&f) - 1.0).abs() < 1e-6);
    }
    // rotation covariance: the image of a circle is a circle about the axis
    let w: Vec<Vector3<f64>> = (0..8)
        .map(|j| develop(&conn, Complex64::from_polar(2.0, j as f64 * 0.7)).unwrap())
        .collect();
    for v in &w {
        assert!((v[2] - w[0][2]).abs() < 1e-8 * w[0][2]);
    }
}
