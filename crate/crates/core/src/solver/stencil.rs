//! Finite-difference kernels on a uniform lattice.

/// Second-order first derivative: central inside, one-sided at the two ends.
pub fn d1_second_order(u: &[f64], h: f64, out: &mut [f64]) {
    let n = u.len();
    debug_assert!(n >= 3 && out.len() == n);
    let inv = 0.5 / h;
    out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv;
    for ((o, l), r) in out[1..n - 1].iter_mut().zip(&u[..n - 2]).zip(&u[2..]) {
        *o = (r - l) * inv;
    }
    out[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv;
}

/// Fourth-order first derivative: central inside, one-sided near the ends.
pub fn d1_fourth_order(u: &[f64], h: f64, out: &mut [f64]) {
    let n = u.len();
    debug_assert!(n >= 5 && out.len() == n);
    let inv = 1.0 / (12.0 * h);
    out[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) * inv;
    out[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) * inv;
    for i in 2..n - 2 {
        out[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) * inv;
    }
    out[n - 2] = -(-3.0 * u[n - 1] - 10.0 * u[n - 2] + 18.0 * u[n - 3] - 6.0 * u[n - 4] + u[n - 5]) * inv;
    out[n - 1] = -(-25.0 * u[n - 1] + 48.0 * u[n - 2] - 36.0 * u[n - 3] + 16.0 * u[n - 4] - 3.0 * u[n - 5]) * inv;
}

pub fn d1_second_order_vec(u: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    d1_second_order(u, h, &mut out);
    out
}

pub fn d1_fourth_order_vec(u: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    d1_fourth_order(u, h, &mut out);
    out
}
