use crate::error::AnalysisError;

/// Estimated convergence order from three nested resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOrder {
    Order(f64),
    /// Differences are at round-off; no order can be measured.
    Saturated,
}

impl ConvergenceOrder {
    pub fn value(self) -> Option<f64> {
        match self {
            ConvergenceOrder::Order(p) => Some(p),
            ConvergenceOrder::Saturated => None,
        }
    }
}

fn stride(coarse: usize, other: usize) -> Result<usize, AnalysisError> {
    if coarse < 2 || (other - 1) % (coarse - 1) != 0 {
        return Err(AnalysisError::NonNested(format!("{coarse} and {other} nodes")));
    }
    Ok((other - 1) / (coarse - 1))
}

/// `log2(|u_h - u_{h/2}| / |u_{h/2} - u_{h/4}|)`, comparing on the coarse nodes.
pub fn convergence_order(coarse: &[f64], mid: &[f64], fine: &[f64]) -> Result<ConvergenceOrder, AnalysisError> {
    let s1 = stride(coarse.len(), mid.len())?;
    let s2 = stride(coarse.len(), fine.len())?;
    if s1 != 2 || s2 != 4 {
        return Err(AnalysisError::NonNested(format!(
            "refinement factors {s1} and {s2}, expected 2 and 4"
        )));
    }
    let (mut e1, mut e2, mut scale) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..coarse.len() {
        let (c, m, f) = (coarse[i], mid[i * s1], fine[i * s2]);
        e1 += (c - m).powi(2);
        e2 += (m - f).powi(2);
        scale = scale.max(f.abs());
    }
    let (e1, e2) = (e1.sqrt(), e2.sqrt());
    let floor = 1e-12 * scale.max(f64::MIN_POSITIVE) * (coarse.len() as f64).sqrt();
    if e2 <= floor || e1 <= floor {
        return Ok(ConvergenceOrder::Saturated);
    }
    Ok(ConvergenceOrder::Order((e1 / e2).log2()))
}

/// Order from two errors against an exact reference at spacings `h` and `h/2`.
pub fn order_from_errors(coarse_error: f64, fine_error: f64) -> f64 {
    (coarse_error / fine_error).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_error_model() {
        let mk = |n: usize| -> Vec<f64> {
            let h = 1.0 / (n - 1) as f64;
            (0..n).map(|i| (i as f64 * h).sin() + h * h * (i as f64 * h).cos()).collect()
        };
        let p = convergence_order(&mk(11), &mk(21), &mk(41)).unwrap().value().unwrap();
        assert!((p - 2.0).abs() < 0.05);
    }

    #[test]
    fn exact_data_saturates() {
        let v = |n: usize| vec![0.5; n];
        assert_eq!(convergence_order(&v(11), &v(21), &v(41)).unwrap(), ConvergenceOrder::Saturated);
    }

    #[test]
    fn rejects_non_nested() {
        let v = |n: usize| vec![0.0; n];
        assert!(convergence_order(&v(11), &v(20), &v(41)).is_err());
    }
}
