/// Clamped cubic spline on a uniform grid starting at 0.
#[derive(Debug, Clone)]
pub struct UniformSpline {
    h: f64,
    y: Vec<f64>,
    // second derivatives at the nodes
    m: Vec<f64>,
}

impl UniformSpline {
    /// `d0` and `d1` are the prescribed first derivatives at the two ends.
    pub fn clamped(h: f64, y: &[f64], d0: f64, d1: f64) -> Self {
        let n = y.len();
        assert!(n >= 3, "spline needs at least three nodes");
        // tridiagonal system for the second derivatives
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        b[0] = 2.0;
        c[0] = 1.0;
        rhs[0] = 6.0 / h * ((y[1] - y[0]) / h - d0);
        for k in 1..n - 1 {
            a[k] = 1.0;
            b[k] = 4.0;
            c[k] = 1.0;
            rhs[k] = 6.0 / (h * h) * (y[k + 1] - 2.0 * y[k] + y[k - 1]);
        }
        a[n - 1] = 1.0;
        b[n - 1] = 2.0;
        rhs[n - 1] = 6.0 / h * (d1 - (y[n - 1] - y[n - 2]) / h);
        let m = solve_tridiagonal(&a, &b, &c, &rhs);
        Self {
            h,
            y: y.to_vec(),
            m,
        }
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let last = self.y.len() - 2;
        let k = ((x / self.h).floor().max(0.0) as usize).min(last);
        (k, x - k as f64 * self.h)
    }

    pub fn value(&self, x: f64) -> f64 {
        let (k, t) = self.locate(x);
        let h = self.h;
        let s = h - t;
        self.m[k] * s * s * s / (6.0 * h)
            + self.m[k + 1] * t * t * t / (6.0 * h)
            + (self.y[k] / h - self.m[k] * h / 6.0) * s
            + (self.y[k + 1] / h - self.m[k + 1] * h / 6.0) * t
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (k, t) = self.locate(x);
        let h = self.h;
        let s = h - t;
        -self.m[k] * s * s / (2.0 * h)
            + self.m[k + 1] * t * t / (2.0 * h)
            + (self.y[k + 1] - self.y[k]) / h
            - (self.m[k + 1] - self.m[k]) * h / 6.0
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let (k, t) = self.locate(x);
        let h = self.h;
        (self.m[k] * (h - t) + self.m[k + 1] * t) / h
    }
}

/// Thomas algorithm. `a` is the sub-diagonal (a[0] unused), `c` the
/// super-diagonal (c[n-1] unused). The matrix must be diagonally dominant.
pub fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for k in 1..n {
        let denom = b[k] - a[k] * cp[k - 1];
        cp[k] = if k + 1 < n { c[k] / denom } else { 0.0 };
        dp[k] = (d[k] - a[k] * dp[k - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for k in (0..n - 1).rev() {
        x[k] = dp[k] - cp[k] * x[k + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubic() {
        let f = |x: f64| 0.3 * x * x * x - x * x + 2.0;
        let df = |x: f64| 0.9 * x * x - 2.0 * x;
        let h = 0.1;
        let y: Vec<f64> = (0..=30).map(|k| f(k as f64 * h)).collect();
        let s = UniformSpline::clamped(h, &y, df(0.0), df(3.0));
        for &x in &[0.0, 0.05, 1.234, 2.99, 3.0] {
            assert!((s.value(x) - f(x)).abs() < 1e-12);
            assert!((s.derivative(x) - df(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn tridiagonal_solve() {
        let a = [0.0, 1.0, 1.0];
        let b = [4.0, 4.0, 4.0];
        let c = [1.0, 1.0, 0.0];
        let x = solve_tridiagonal(&a, &b, &c, &[5.0, 6.0, 5.0]);
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }
}
