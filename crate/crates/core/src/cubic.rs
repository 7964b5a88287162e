//! The model cubic differential `scale · zⁿ dz³` on a disk and its flat metric.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model differential `scale · zⁿ dz³`.
///
/// The modulus of `scale` is always 1. A differential `c · zⁿ dz³` with
/// `|c| ≠ 1` is brought to this form by the coordinate change `w = λz` with
/// `λ = |c|^{1/(n+3)}` (see [`CubicDifferential::absorb_modulus`]), because the
/// differential has weight `n + 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicDifferential {
    n: u32,
    scale: Complex64,
    zero_mode: bool,
}

impl CubicDifferential {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            scale: Complex64::new(1.0, 0.0),
            zero_mode: false,
        }
    }

    /// `e^{iφ} zⁿ dz³`.
    pub fn with_phase(n: u32, phase: f64) -> Self {
        Self {
            n,
            scale: Complex64::from_polar(1.0, phase),
            zero_mode: false,
        }
    }

    pub fn with_scale(n: u32, scale: Complex64) -> Result<Self> {
        if !scale.re.is_finite() || !scale.im.is_finite() || (scale.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "scale must have modulus 1 (got {scale}); rescale the coordinate with absorb_modulus"
            )));
        }
        Ok(Self {
            n,
            scale,
            zero_mode: false,
        })
    }

    /// The identically zero differential. Only meaningful as a check of the
    /// solver against the exact hyperbolic metric.
    pub fn zero() -> Self {
        Self {
            n: 0,
            scale: Complex64::new(0.0, 0.0),
            zero_mode: true,
        }
    }

    /// Splits `c` into a unit scale and the coordinate factor `λ` such that
    /// `c · zⁿ dz³ = e^{i arg c} · wⁿ dw³` with `w = λz`.
    pub fn absorb_modulus(n: u32, c: Complex64) -> Result<(Self, f64)> {
        let r = c.norm();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cannot absorb modulus of {c}"
            )));
        }
        let lambda = r.powf(1.0 / (n as f64 + 3.0));
        Ok((Self::with_phase(n, c.arg()), lambda))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn is_zero_mode(&self) -> bool {
        self.zero_mode
    }

    /// The reflected differential `conj(ψ(z̄))`, whose developing image is the
    /// mirror image of this one.
    pub fn conjugate(&self) -> Self {
        Self {
            scale: self.scale.conj(),
            ..*self
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.zero_mode {
            return Complex64::new(0.0, 0.0);
        }
        self.scale * z.powu(self.n)
    }

    /// `|ψ(z)|²` computed from `|z|` only.
    pub fn abs_sq_at_radius(&self, rho: f64) -> f64 {
        if self.zero_mode {
            0.0
        } else {
            rho.powi(2 * self.n as i32)
        }
    }

    /// Density of the flat metric `|ψ|^{2/3}`.
    pub fn flat_metric_density(&self, z: Complex64) -> Result<f64> {
        if self.zero_mode {
            return Err(Error::UndefinedMetric);
        }
        Ok(self.eval(z).norm().powf(2.0 / 3.0))
    }
}

/// Flat distance from `0` to a point at Euclidean radius `t`:
/// `(n/3 + 1)⁻¹ t^{n/3+1}`.
pub fn flat_radius(n: u32, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must be nonnegative, got {t}"
        )));
    }
    let e = n as f64 / 3.0 + 1.0;
    Ok(t.powf(e) / e)
}

/// Inverse of [`flat_radius`].
pub fn radius_for_flat_radius(n: u32, flat: f64) -> Result<f64> {
    if !(flat >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "flat radius must be nonnegative, got {flat}"
        )));
    }
    let e = n as f64 / 3.0 + 1.0;
    Ok((flat * e).powf(1.0 / e))
}

/// Cone angle `2π + 2πn/3` of the flat metric at a zero of multiplicity `n`.
pub fn cone_angle(n: u32) -> f64 {
    2.0 * PI + 2.0 * PI * n as f64 / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(CubicDifferential::new(0).eval(c(3.0, 4.0)), c(1.0, 0.0));
        let v = CubicDifferential::new(2).eval(c(0.0, 2.0));
        assert!((v - c(-4.0, 0.0)).norm() < 1e-15);
        assert_eq!(CubicDifferential::zero().eval(c(0.3, -2.0)), c(0.0, 0.0));
    }

    #[test]
    fn flat_density_examples() {
        let d = CubicDifferential::new(3)
            .flat_metric_density(c(2.0, 0.0))
            .unwrap();
        assert!((d - 4.0).abs() < 1e-14);
        let d = CubicDifferential::new(0)
            .flat_metric_density(c(-7.0, 0.5))
            .unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let d = CubicDifferential::new(1)
            .flat_metric_density(c(0.0, 0.0))
            .unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(
            CubicDifferential::zero().flat_metric_density(c(1.0, 0.0)),
            Err(Error::UndefinedMetric)
        );
    }

    #[test]
    fn flat_radius_examples() {
        assert!((flat_radius(0, 5.0).unwrap() - 5.0).abs() < 1e-14);
        assert!((flat_radius(3, 2.0).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(flat_radius(4, 0.0).unwrap(), 0.0);
        assert!(flat_radius(1, -1.0).is_err());
        let t = radius_for_flat_radius(2, 6.0).unwrap();
        assert!((flat_radius(2, t).unwrap() - 6.0).abs() < 1e-12);
    }

    /// Simpson quadrature of `|ψ|^{1/3}` along `[0, t]` against the closed form.
    #[test]
    fn flat_radius_matches_quadrature() {
        for n in 0..5u32 {
            let cd = CubicDifferential::new(n);
            let t = 2.7;
            // graded grid x = t·σ³ keeps the integrand smooth at the zero
            let m = 4000;
            let f = |sigma: f64| {
                let x = t * sigma.powi(3);
                let dens = cd.flat_metric_density(c(x, 0.0)).unwrap().sqrt();
                dens * 3.0 * t * sigma * sigma
            };
            let h = 1.0 / m as f64;
            let mut acc = f(0.0) + f(1.0);
            for k in 1..m {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * f(k as f64 * h);
            }
            let integral = acc * h / 3.0;
            assert!(
                (integral - flat_radius(n, t).unwrap()).abs() < 1e-10,
                "n={n}"
            );
        }
    }

    #[test]
    fn cone_angles() {
        assert!((cone_angle(1) - 8.0 * PI / 3.0).abs() < 1e-14);
        assert!((cone_angle(0) - 2.0 * PI).abs() < 1e-15);
        assert!((cone_angle(3) - 4.0 * PI).abs() < 1e-14);
        for n in 1..20 {
            assert!(cone_angle(n) > 2.0 * PI);
        }
    }

    #[test]
    fn scale_must_be_unimodular() {
        assert!(CubicDifferential::with_scale(1, c(2.0, 0.0)).is_err());
        assert!(CubicDifferential::with_scale(1, c(0.6, 0.8)).is_ok());
        let (cd, lambda) = CubicDifferential::absorb_modulus(1, c(0.0, 16.0)).unwrap();
        assert!((lambda - 2.0).abs() < 1e-14);
        // c zⁿ dz³ = e^{iφ} wⁿ dw³ with w = λz
        let z = c(0.3, -0.7);
        let lhs = c(0.0, 16.0) * z;
        let rhs = cd.eval(z * lambda) * lambda.powi(3);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn conjugate_reflects() {
        let cd = CubicDifferential::with_phase(2, 0.4);
        let z = c(0.8, 0.3);
        let lhs = cd.conjugate().eval(z);
        let rhs = cd.eval(z.conj()).conj();
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
