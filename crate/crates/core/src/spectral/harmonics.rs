use num_complex::Complex64;
use std::f64::consts::PI;

/// Spin weights used by the Maxwell components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinWeight {
    Plus,
    Zero,
    Minus,
}

impl SpinWeight {
    fn value(self) -> i32 {
        match self {
            SpinWeight::Plus => 1,
            SpinWeight::Zero => 0,
            SpinWeight::Minus => -1,
        }
    }
}

fn factorial(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: i32, k: i32) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Goldberg's closed form for the spin-weighted harmonic `sY_lm` (Newman-Penrose `eth` convention).
fn goldberg(s: i32, l: i32, m: i32, theta: f64, phi: f64) -> Complex64 {
    if s.abs() > l || m.abs() > l {
        return Complex64::new(0.0, 0.0);
    }
    let norm = (factorial(l + m) * factorial(l - m) * f64::from(2 * l + 1)
        / (4.0 * PI * factorial(l + s) * factorial(l - s)))
    .sqrt();
    let (sh, ch) = (0.5 * theta).sin_cos();
    let mut sum = 0.0;
    for r in 0..=(l - s) {
        let c = binomial(l - s, r) * binomial(l + s, r + s - m);
        if c == 0.0 {
            continue;
        }
        // sin^{2l}(x) cot^k(x) written with nonnegative powers.
        let k = 2 * r + s - m;
        let sign = if (l - r - s).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sum += sign * c * sh.powi(2 * l - k) * ch.powi(k);
    }
    let phase = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Complex64::from_polar(phase * norm * sum, f64::from(m) * phi)
}

/// Harmonic of the given spin weight in this crate's convention.
///
/// The spin -1 harmonic is the negative of the Newman-Penrose one so that the
/// ladder coefficients come out symmetric; see the module docs.
pub fn spin_harmonic(weight: SpinWeight, l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let y = goldberg(weight.value(), l as i32, m, theta, phi);
    match weight {
        SpinWeight::Minus => -y,
        _ => y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        let (t, p) = (0.7, 1.3);
        let y00 = spin_harmonic(SpinWeight::Zero, 0, 0, t, p);
        assert!((y00.re - 0.5 / PI.sqrt()).abs() < 1e-14 && y00.im.abs() < 1e-15);
        let y10 = spin_harmonic(SpinWeight::Zero, 1, 0, t, p);
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt() * t.cos()).abs() < 1e-14);
        let y11 = spin_harmonic(SpinWeight::Zero, 1, 1, t, p);
        let expect = Complex64::from_polar(-(3.0 / (8.0 * PI)).sqrt() * t.sin(), p);
        assert!((y11 - expect).norm() < 1e-14);
    }

    #[test]
    fn orthonormal_on_sphere() {
        // Gauss-free check: midpoint rule in theta and phi is accurate for band-limited integrands.
        let (nt, np) = (400, 16);
        for w in [SpinWeight::Plus, SpinWeight::Zero, SpinWeight::Minus] {
            let lmin = if w == SpinWeight::Zero { 0 } else { 1 };
            for l in lmin..=3u32 {
                for m in -(l as i32)..=(l as i32) {
                    let mut norm = 0.0;
                    let mut cross = Complex64::new(0.0, 0.0);
                    for i in 0..nt {
                        let t = PI * (i as f64 + 0.5) / nt as f64;
                        for j in 0..np {
                            let p = 2.0 * PI * j as f64 / np as f64;
                            let y = spin_harmonic(w, l, m, t, p);
                            let z = spin_harmonic(w, 3, m, t, p);
                            let da = t.sin() * (PI / nt as f64) * (2.0 * PI / np as f64);
                            norm += y.norm_sqr() * da;
                            cross += y * z.conj() * da;
                        }
                    }
                    assert!((norm - 1.0).abs() < 1e-4, "{w:?} l={l} m={m} norm={norm}");
                    if l != 3 {
                        assert!(cross.norm() < 1e-4);
                    }
                }
            }
        }
    }
}
