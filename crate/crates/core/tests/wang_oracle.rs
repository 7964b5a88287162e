//! Independent check of the radial solver: shooting on the initial value
//! problem `u″ + u′/ρ = 2eᵘ − 4ρ²e⁻²ᵘ`, `u(0) = a`, `u′(0) = 0` for `n = 1`.

use polylimit::wang::{solve, RadialGrid, SolverConfig};
use polylimit::CubicDifferential;

fn forcing(u: f64, rho: f64) -> f64 {
    2.0 * u.exp() - 4.0 * rho * rho * (-2.0 * u).exp()
}

fn u_flat(rho: f64) -> f64 {
    std::f64::consts::LN_2 / 3.0 + 2.0 / 3.0 * rho.ln()
}

/// +1 if the trajectory from `a` overshoots the flat boundary value at `r`,
/// −1 if it undershoots.
fn shoot(a: f64, r: f64, steps: usize) -> f64 {
    let h = r / steps as f64;
    // series start: u = a + c2 ρ² + c4 ρ⁴
    let c2 = a.exp() / 2.0;
    let c4 = (2.0 * a.exp() * c2 - 4.0 * (-2.0 * a).exp()) / 16.0;
    let mut rho = h;
    let mut u = a + c2 * h * h + c4 * h.powi(4);
    let mut p = 2.0 * c2 * h + 4.0 * c4 * h.powi(3);
    let f = |rho: f64, u: f64, p: f64| (p, forcing(u, rho) - p / rho);
    for _ in 1..steps {
        let (k1u, k1p) = f(rho, u, p);
        let (k2u, k2p) = f(rho + h / 2.0, u + h / 2.0 * k1u, p + h / 2.0 * k1p);
        let (k3u, k3p) = f(rho + h / 2.0, u + h / 2.0 * k2u, p + h / 2.0 * k2p);
        let (k4u, k4p) = f(rho + h, u + h * k3u, p + h * k3p);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        rho += h;
        if !u.is_finite() {
            return if u > 0.0 { 1.0 } else { -1.0 };
        }
        // far off the flat profile the trajectory is already blowing up
        let gap = u - u_flat(rho.max(1.0));
        if rho > 1.0 && gap.abs() > 3.0 {
            return gap.signum();
        }
    }
    (u - u_flat(r)).signum()
}

fn shooting_center_value(r: f64, steps: usize) -> f64 {
    let (mut lo, mut hi) = (-1.0, 1.0);
    assert_eq!(shoot(lo, r, steps), -1.0);
    assert_eq!(shoot(hi, r, steps), 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shoot(mid, r, steps) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn n1_center_value_matches_shooting() {
    let r = 8.0;
    let coarse = shooting_center_value(r, 8000);
    let fine = shooting_center_value(r, 16000);
    let oracle = (16.0 * fine - coarse) / 15.0;
    assert!(
        (coarse - fine).abs() < 1e-9,
        "RK4 runs disagree: {coarse} vs {fine}"
    );

    let cd = CubicDifferential::new(1);
    let config = SolverConfig::default();
    let a = solve(&cd, &RadialGrid::new(r, 2048).unwrap(), &config)
        .unwrap()
        .values()[0];
    let b = solve(&cd, &RadialGrid::new(r, 4096).unwrap(), &config)
        .unwrap()
        .values()[0];
    println!("oracle {oracle:.12}  solver m=2048 {a:.12}  m=4096 {b:.12}");
    // second-order scheme: raw error at m = 4096 is a few 1e-7
    assert!((b - oracle).abs() < 1e-6);
    let extrapolated = (4.0 * b - a) / 3.0;
    assert!(
        (extrapolated - oracle).abs() < 1e-8,
        "extrapolated {extrapolated}"
    );
}
