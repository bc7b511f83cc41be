//! Independent check of the ladder action using hand-written low-degree harmonics.

use super::harmonics::{spin_harmonic, SpinWeight};
use super::{ladder_coefficients, lambda};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

/// Second-order jet `(f, f', f'')` for exact differentiation of explicit formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn variable(x: f64) -> Self {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }
    pub fn constant(x: f64) -> Self {
        Jet { v: x, d1: 0.0, d2: 0.0 }
    }
    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        Jet {
            v: s,
            d1: c * self.d1,
            d2: c * self.d2 - s * self.d1 * self.d1,
        }
    }
    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        Jet {
            v: c,
            d1: -s * self.d1,
            d2: -s * self.d2 - c * self.d1 * self.d1,
        }
    }
    pub fn powi(self, n: i32) -> Self {
        (0..n).fold(Jet::constant(1.0), |acc, _| acc * self)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}
impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}
impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}
impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}
impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet { v: self * o.v, d1: self * o.d1, d2: self * o.d2 }
    }
}

/// Polar part of the Condon-Shortley harmonic for `l <= 3`; `Y = theta_part * e^{i m phi}`.
fn polar_part(l: u32, m: i32, theta: Jet) -> Option<Jet> {
    let c = theta.cos();
    let s = theta.sin();
    let one = Jet::constant(1.0);
    let k = |x: f64| (x / PI).sqrt();
    let sign = if m < 0 && m % 2 != 0 { -1.0 } else { 1.0 };
    let mm = m.abs();
    // Negative orders: Y_{l,-m} polar part = (-1)^m Y_{l,m} polar part.
    let base = match (l, mm) {
        (0, 0) => 0.5 * k(1.0) * one,
        (1, 0) => k(3.0 / 4.0) * c,
        (1, 1) => -k(3.0 / 8.0) * s,
        (2, 0) => k(5.0 / 16.0) * (3.0 * c.powi(2) - one),
        (2, 1) => -k(15.0 / 8.0) * (s * c),
        (2, 2) => k(15.0 / 32.0) * s.powi(2),
        (3, 0) => k(7.0 / 16.0) * (5.0 * c.powi(3) - 3.0 * c),
        (3, 1) => -k(21.0 / 64.0) * (s * (5.0 * c.powi(2) - one)),
        (3, 2) => k(105.0 / 32.0) * (s.powi(2) * c),
        (3, 3) => -k(35.0 / 64.0) * s.powi(3),
        _ => return None,
    };
    Some(sign * base)
}

/// Maximum deviation between explicit differentiation and the ladder action for `l <= 3`.
///
/// Checks on a 64 x 64 interior sample grid that
/// `M Y = -c_down Y_1`, `M-bar Y = -c_down Y_-1` (against the library harmonics), and
/// `(M-bar + cot) Y_1 = c_up Y`, `(M + cot) Y_-1 = c_up Y` (by explicit second derivatives).
/// Returns `None` for `l > 3` or `|m| > l`.
pub fn angular_oracle_residual(l: u32, m: i32) -> Option<f64> {
    if l > 3 || m.unsigned_abs() > l {
        return None;
    }
    let coef = ladder_coefficients(l);
    let lam = lambda(l);
    let mf = f64::from(m);
    let n = 64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let theta = PI * (i as f64 + 0.5) / n as f64;
        let p = polar_part(l, m, Jet::variable(theta))?;
        let (s, c) = theta.sin_cos();
        let cot = c / s;
        // Polar parts of M Y and M-bar Y: d_theta -/+ m/sin.
        let my = p.d1 - mf * p.v / s;
        let mbar_y = p.d1 + mf * p.v / s;
        // Their theta derivatives, for the second ladder step.
        let my_d = p.d2 - mf * (p.d1 * s - p.v * c) / (s * s);
        let mbar_y_d = p.d2 + mf * (p.d1 * s - p.v * c) / (s * s);
        let (plus_ladder, minus_ladder) = if lam > 0.0 {
            let a = -my / lam;
            let a_d = -my_d / lam;
            let b = -mbar_y / lam;
            let b_d = -mbar_y_d / lam;
            (
                a_d + mf * a / s + cot * a - coef.c_up * p.v,
                b_d - mf * b / s + cot * b - coef.c_up * p.v,
            )
        } else {
            (0.0, 0.0)
        };
        worst = worst.max(plus_ladder.abs()).max(minus_ladder.abs());
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let e = Complex64::from_polar(1.0, mf * phi);
            let y_plus = spin_harmonic(SpinWeight::Plus, l, m, theta, phi);
            let y_minus = spin_harmonic(SpinWeight::Minus, l, m, theta, phi);
            let y = spin_harmonic(SpinWeight::Zero, l, m, theta, phi);
            worst = worst
                .max((e * my + coef.c_down * y_plus).norm())
                .max((e * mbar_y + coef.c_down * y_minus).norm())
                .max((e * p.v - y).norm());
        }
    }
    Some(worst)
}
