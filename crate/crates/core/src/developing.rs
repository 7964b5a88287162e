//! The affine sphere connection built from `(u, ψ)`, its parallel transport
//! along radial rays, and Wang's developing map.
//!
//! Transport is integrated in the frame `(e^{−u/2}∂_x, e^{−u/2}∂_y, 1)`, which is
//! orthonormal for `g` on the tangent part. There the connection coefficients are
//! trace-free, so transports are unimodular. The frame differs from
//! `(∂_x, ∂_y, 1)` by the diagonal gauge `diag(e^{−u/2}, e^{−u/2}, 1)`, and at the
//! base point this is a fixed linear map, so projectivized images agree up to
//! that fixed change of chart.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wang::ConformalFactor;

/// Description of the transport convention, recorded in serialized output.
pub const CONVENTION: &str =
    "T solves dT/dt = T*A(ray'), T(0)=I, accumulated from the base point 0 outward; frame (e^(-u/2)d_x, e^(-u/2)d_y, 1)";

/// Target value of `h·‖A‖` per RK4 step when choosing default step counts.
pub const STEP_SCALE: f64 = 0.02;

type C3 = Matrix3<Complex64>;

/// Local data of the connection at a point.
#[derive(Debug, Clone, Copy)]
struct Local {
    u: f64,
    ux: f64,
    uy: f64,
    // e^{−u}ψ
    p: f64,
    q: f64,
}

/// Connection coefficients of the affine sphere connection for a solved
/// conformal factor.
#[derive(Debug, Clone)]
pub struct ConnectionField {
    cf: ConformalFactor,
}

impl ConnectionField {
    pub fn conformal_factor(&self) -> &ConformalFactor {
        &self.cf
    }

    /// Radius of the disk on which the field is defined.
    pub fn radius(&self) -> f64 {
        self.cf.grid().r()
    }

    fn check(&self, z: Complex64) -> Result<()> {
        if !(z.norm() < self.radius()) {
            return Err(Error::OutsideRegion(format!(
                "{z} is not inside B(0, {})",
                self.radius()
            )));
        }
        Ok(())
    }

    fn local(&self, z: Complex64) -> Local {
        let rho = z.norm();
        let u = self.cf.value(rho);
        let du = self.cf.derivative(rho);
        let (ux, uy) = if rho > 0.0 {
            (du * z.re / rho, du * z.im / rho)
        } else {
            (0.0, 0.0)
        };
        let w = self.cf.cd().eval(z) * (-u).exp();
        Local {
            u,
            ux,
            uy,
            p: w.re,
            q: w.im,
        }
    }

    /// Coefficients `(A_x, A_y)` in the unimodular frame used for transport.
    pub fn coefficients(&self, z: Complex64) -> Result<(Matrix3<f64>, Matrix3<f64>)> {
        self.check(z)?;
        Ok(gauge_coefficients(&self.local(z)))
    }

    /// Coefficients `(A_x, A_y)` in the coordinate frame `(∂_x, ∂_y, 1)`, in closed form.
    pub fn chart_coefficients(&self, z: Complex64) -> Result<(Matrix3<f64>, Matrix3<f64>)> {
        self.check(z)?;
        let l = self.local(z);
        let e = l.u.exp();
        let ax = Matrix3::new(
            l.p + l.ux / 2.0,
            -l.q + l.uy / 2.0,
            1.0,
            -l.q - l.uy / 2.0,
            -l.p + l.ux / 2.0,
            0.0,
            e,
            0.0,
            0.0,
        );
        let ay = Matrix3::new(
            -l.q + l.uy / 2.0,
            -l.p - l.ux / 2.0,
            0.0,
            -l.p + l.ux / 2.0,
            l.q + l.uy / 2.0,
            1.0,
            0.0,
            e,
            0.0,
        );
        Ok((ax, ay))
    }

    /// The complex connection matrix in the frame `(∂_z, ∂_z̄, 1)` evaluated on
    /// `∂_x` and `∂_y`, conjugated into the real frame `(∂_x, ∂_y, 1)`.
    pub fn complex_route(&self, z: Complex64) -> Result<(C3, C3)> {
        self.check(z)?;
        let l = self.local(z);
        let i = Complex64::i();
        let uz = Complex64::new(l.ux, -l.uy) / 2.0;
        let uzb = Complex64::new(l.ux, l.uy) / 2.0;
        let w = Complex64::new(l.p, l.q);
        let half_e = Complex64::from(l.u.exp() / 2.0);
        let m = |dz: Complex64, dzb: Complex64| {
            C3::new(
                uz * dz,
                w.conj() * dzb,
                dz,
                w * dz,
                uzb * dzb,
                dzb,
                half_e * dzb,
                half_e * dz,
                Complex64::from(0.0),
            )
        };
        let one = Complex64::from(1.0);
        let half = Complex64::from(0.5);
        let zero = Complex64::from(0.0);
        // columns: real coordinates of ∂_z and ∂_z̄
        let p = C3::new(half, half, zero, -i * half, i * half, zero, zero, zero, one);
        let p_inv = C3::new(one, i, zero, one, -i, zero, zero, zero, one);
        Ok((p * m(one, one) * p_inv, p * m(i, -i) * p_inv))
    }

    /// Largest deviation of the complex route from the closed-form real
    /// coefficients, including all imaginary parts.
    pub fn reality_residual(&self, z: Complex64) -> Result<f64> {
        let (cx, cy) = self.complex_route(z)?;
        let (ax, ay) = self.chart_coefficients(z)?;
        let mut worst = 0.0f64;
        for (c, a) in [(cx, ax), (cy, ay)] {
            for (ce, ae) in c.iter().zip(a.iter()) {
                worst = worst.max(ce.im.abs()).max((ce.re - ae).abs());
            }
        }
        Ok(worst)
    }

    /// `‖∂_xA_y − ∂_yA_x + [A_x, A_y]‖_∞` with centered differences of step `delta`.
    pub fn flatness_residual(&self, z: Complex64, delta: f64) -> Result<f64> {
        let dx = Complex64::new(delta, 0.0);
        let dy = Complex64::new(0.0, delta);
        self.check(z + dx)?;
        self.check(z - dx)?;
        self.check(z + dy)?;
        self.check(z - dy)?;
        let (ax, ay) = self.coefficients(z)?;
        let ay_x = (self.coefficients(z + dx)?.1 - self.coefficients(z - dx)?.1) / (2.0 * delta);
        let ax_y = (self.coefficients(z + dy)?.0 - self.coefficients(z - dy)?.0) / (2.0 * delta);
        let curv = ay_x - ax_y + ax * ay - ay * ax;
        Ok(curv.amax())
    }

    /// `A(e^{iθ})` at `z`.
    fn along(&self, z: Complex64, dir: Complex64) -> Matrix3<f64> {
        let (ax, ay) = gauge_coefficients(&self.local(z));
        ax * dir.re + ay * dir.im
    }

    /// Step count giving `h·‖A‖ ≈ STEP_SCALE` at the far end of the ray to `z`.
    pub fn default_steps(&self, z: Complex64) -> usize {
        let rho = z.norm();
        let l = self.local(z);
        let bound = 1.0 + (l.u / 2.0).exp() + l.ux.hypot(l.uy) + l.p.hypot(l.q);
        ((rho * bound / STEP_SCALE).ceil() as usize).max(32)
    }
}

fn gauge_coefficients(l: &Local) -> (Matrix3<f64>, Matrix3<f64>) {
    let e = (l.u / 2.0).exp();
    let ax = Matrix3::new(
        l.p,
        -l.q + l.uy / 2.0,
        e,
        -l.q - l.uy / 2.0,
        -l.p,
        0.0,
        e,
        0.0,
        0.0,
    );
    let ay = Matrix3::new(
        -l.q,
        -l.p - l.ux / 2.0,
        0.0,
        -l.p + l.ux / 2.0,
        l.q,
        e,
        0.0,
        e,
        0.0,
    );
    (ax, ay)
}

pub fn assemble_connection(cf: &ConformalFactor) -> Result<ConnectionField> {
    if !cf.is_accepted() {
        return Err(Error::NotAccepted {
            residual: cf.residual_norm(),
            tol: cf.tol(),
        });
    }
    Ok(ConnectionField { cf: cf.clone() })
}

/// Parallel transport along the segment from 0 to `z`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transport {
    pub z: Complex64,
    /// Transport matrix `T(z)`.
    pub t: Matrix3<f64>,
    /// Its inverse transpose, integrated as its own ODE.
    pub dual: Matrix3<f64>,
    pub steps: usize,
    /// Max-entry difference to the run with twice the steps, relative to `‖T‖`.
    pub step_error_estimate: f64,
}

/// RK4 propagators for `T′ = T·A` and `S′ = −S·Aᵀ` along the segment `a → b`.
pub(crate) fn integrate_segment(
    conn: &ConnectionField,
    a: Complex64,
    b: Complex64,
    steps: usize,
) -> (Matrix3<f64>, Matrix3<f64>) {
    let delta = b - a;
    let len = delta.norm();
    let mut t = Matrix3::identity();
    let mut s = Matrix3::identity();
    if len == 0.0 {
        return (t, s);
    }
    let dir = delta / len;
    let h = len / steps as f64;
    let id = Matrix3::<f64>::identity();
    let mut prev = conn.along(a, dir);
    for k in 0..steps {
        let t0 = k as f64 * h;
        let mid = conn.along(a + dir * (t0 + h / 2.0), dir);
        let end = conn.along(
            if k + 1 == steps {
                b
            } else {
                a + dir * (t0 + h)
            },
            dir,
        );
        let k1 = prev;
        let k2 = (id + k1 * (h / 2.0)) * mid;
        let k3 = (id + k2 * (h / 2.0)) * mid;
        let k4 = (id + k3 * h) * end;
        t *= id + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        let (d1, dm, de) = (-prev.transpose(), -mid.transpose(), -end.transpose());
        let l1 = d1;
        let l2 = (id + l1 * (h / 2.0)) * dm;
        let l3 = (id + l2 * (h / 2.0)) * dm;
        let l4 = (id + l3 * h) * de;
        s *= id + (l1 + (l2 + l3) * 2.0 + l4) * (h / 6.0);
        prev = end;
    }
    (t, s)
}

/// Transport along the ray from 0 to `z` with `steps` RK4 steps.
pub fn transport(conn: &ConnectionField, z: Complex64, steps: usize) -> Result<Transport> {
    conn.check(z)?;
    if steps < 32 {
        return Err(Error::InvalidParameter(format!(
            "need at least 32 steps, got {steps}"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let (t, dual) = integrate_segment(conn, zero, z, steps);
    let (t2, _) = integrate_segment(conn, zero, z, 2 * steps);
    let step_error_estimate = (t - t2).amax() / t2.amax();
    Ok(Transport {
        z,
        t,
        dual,
        steps,
        step_error_estimate,
    })
}

/// `f(z) = T(z)·(0, 0, 1)ᵀ`.
pub fn develop(conn: &ConnectionField, z: Complex64) -> Result<Vector3<f64>> {
    develop_with_steps(conn, z, conn.default_steps(z))
}

pub fn develop_with_steps(
    conn: &ConnectionField,
    z: Complex64,
    steps: usize,
) -> Result<Vector3<f64>> {
    conn.check(z)?;
    let (t, _) = integrate_segment(conn, Complex64::new(0.0, 0.0), z, steps.max(1));
    Ok(t.column(2).into_owned())
}

/// `f*(z) = T(z)^{−T}·(0, 0, 1)ᵀ`.
pub fn develop_dual(conn: &ConnectionField, z: Complex64) -> Result<Vector3<f64>> {
    conn.check(z)?;
    let (_, s) = integrate_segment(conn, Complex64::new(0.0, 0.0), z, conn.default_steps(z));
    Ok(s.column(2).into_owned())
}

/// `f(ρe^{2πij/k})` for `j = 0..k`, each along its own ray. Rays run in
/// parallel; every ray is an independent integration, so the output does not
/// depend on the schedule.
pub fn develop_boundary(conn: &ConnectionField, rho: f64, k: usize) -> Result<Vec<Vector3<f64>>> {
    let steps = conn.default_steps(Complex64::new(rho, 0.0));
    develop_boundary_with_steps(conn, rho, k, steps)
}

pub fn develop_boundary_with_steps(
    conn: &ConnectionField,
    rho: f64,
    k: usize,
    steps: usize,
) -> Result<Vec<Vector3<f64>>> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 samples, got {k}"
        )));
    }
    if !(rho >= 0.0 && rho < conn.radius()) {
        return Err(Error::OutsideRegion(format!(
            "radius {rho} not inside B(0, {})",
            conn.radius()
        )));
    }
    (0..k)
        .into_par_iter()
        .map(|j| develop_with_steps(conn, boundary_point(rho, j, k), steps))
        .collect()
}

/// Transport around the closed polygon through `vertices`, starting and
/// ending at the first one. Flatness makes it the identity.
pub fn loop_holonomy(
    conn: &ConnectionField,
    vertices: &[Complex64],
    steps_per_edge: usize,
) -> Result<Matrix3<f64>> {
    if vertices.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "a loop needs at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    for &z in vertices {
        conn.check(z)?;
    }
    let mut h = Matrix3::identity();
    for (i, &a) in vertices.iter().enumerate() {
        let b = vertices[(i + 1) % vertices.len()];
        h *= integrate_segment(conn, a, b, steps_per_edge.max(1)).0;
    }
    Ok(h)
}

/// `ρe^{2πij/k}`.
pub fn boundary_point(rho: f64, j: usize, k: usize) -> Complex64 {
    Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / k as f64)
}
