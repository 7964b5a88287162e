//! Growth series of hyperbolic triangle groups, shared by the oracle and
//! acceptance tests.

fn series_inverse(p: &[i64]) -> Vec<i64> {
    assert_eq!(p[0], 1);
    let mut q = vec![0i64; p.len()];
    q[0] = 1;
    for k in 1..p.len() {
        q[k] = -(1..=k).map(|j| p[j] * q[k - j]).sum::<i64>();
    }
    q
}

fn series_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0i64; a.len()];
    for i in 0..a.len() {
        for j in 0..a.len() - i {
            c[i + j] += a[i] * b[j];
        }
    }
    c
}

/// `W(t) = 1 / Σ_T (−1)^{|T|} t^{ℓ_T} / W_T(t)` over finite parabolic
/// subgroups, truncated after `t^max_len`.
pub fn steinberg_counts(orders: [u32; 3], max_len: usize) -> Vec<i64> {
    let len = max_len + 1;
    let poly = |coeffs: &[i64]| {
        let mut v = vec![0i64; len];
        for (i, c) in coeffs.iter().enumerate().take(len) {
            v[i] = *c;
        }
        v
    };
    let one_plus_t = poly(&[1, 1]);
    let mut total = poly(&[1]);
    // three rank-one subgroups, each t/(1+t)
    let rank_one = series_mul(&poly(&[0, 1]), &series_inverse(&one_plus_t));
    for k in 0..len {
        total[k] -= 3 * rank_one[k];
    }
    for m in orders {
        let q = poly(&vec![1i64; m as usize]);
        let w = series_mul(&one_plus_t, &q);
        let mut top = vec![0i64; len];
        if (m as usize) < len {
            top[m as usize] = 1;
        }
        let term = series_mul(&top, &series_inverse(&w));
        for k in 0..len {
            total[k] += term[k];
        }
    }
    series_inverse(&total)
}
