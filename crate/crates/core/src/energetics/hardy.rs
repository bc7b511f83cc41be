use crate::solver::stencil::d1_second_order_vec;

/// Outcome of one weighted Hardy inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `C_H = 8/(alpha+1)^2 + 4/(alpha+1)`: the proof's constants doubled.
pub fn hardy_constant(alpha: f64) -> f64 {
    8.0 / (alpha + 1.0).powi(2) + 4.0 / (alpha + 1.0)
}

/// Unit-mass C^1 bump `15/16 (1 - x^2)^2` on `[-1, 1]`.
pub fn unit_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        0.9375 * (1.0 - x * x).powi(2)
    }
}

/// Checks `int |f|^2 (1+|rs|)^{-alpha-2} <= C_H int (|f'|^2 (1+|rs|)^{-alpha} + chi_H |f|^2)`
/// over `|rs| <= t/2`, for `f` sampled on the uniform nodes `rs`.
pub fn hardy_check(rs: &[f64], f: &[f64], t: f64, alpha: f64, chi_h: &[f64]) -> HardyOutcome {
    let n = rs.len();
    assert!(n >= 3 && f.len() == n && chi_h.len() == n, "hardy_check: mismatched samples");
    let h = rs[1] - rs[0];
    let df = d1_second_order_vec(f, h);
    let inside: Vec<usize> = (0..n).filter(|&i| rs[i].abs() <= 0.5 * t).collect();
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for (k, &i) in inside.iter().enumerate() {
        let w = if k == 0 || k + 1 == inside.len() { 0.5 * h } else { h };
        let weight = 1.0 + rs[i].abs();
        lhs += w * f[i] * f[i] / weight.powf(alpha + 2.0);
        rhs += w * (df[i] * df[i] / weight.powf(alpha) + chi_h[i] * f[i] * f[i]);
    }
    rhs *= hardy_constant(alpha);
    HardyOutcome { lhs, rhs, pass: lhs <= rhs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(n: usize, half: f64) -> Vec<f64> {
        (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_function() {
        let rs = nodes(401, 50.0);
        let z = vec![0.0; rs.len()];
        let chi: Vec<f64> = rs.iter().map(|&x| unit_bump(x)).collect();
        let o = hardy_check(&rs, &z, 100.0, 1.0, &chi);
        assert_eq!((o.lhs, o.rhs, o.pass), (0.0, 0.0, true));
    }

    #[test]
    fn constant_function() {
        let rs = nodes(4001, 200.0);
        let one = vec![1.0; rs.len()];
        let chi: Vec<f64> = rs.iter().map(|&x| unit_bump(x)).collect();
        let mass: f64 = chi.iter().sum::<f64>() * (rs[1] - rs[0]);
        assert!((mass - 1.0).abs() < 1e-4);
        let alpha = 1.0;
        let o = hardy_check(&rs, &one, 400.0, alpha, &chi);
        // lhs = 2 int_0^200 (1+x)^{-3} = 1 - 1/201^2.
        assert!((o.lhs - (1.0 - 1.0 / 201f64.powi(2))).abs() < 1e-2);
        assert!((o.rhs - hardy_constant(alpha) * mass).abs() < 1e-9);
        assert!(o.pass);
    }
}
