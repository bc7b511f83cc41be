//! Dictionaries between the Maxwell field representations.
//!
//! * spinor components `phi_1, phi_0, phi_-1` in the stationary orthonormal frame;
//! * coordinate components `Phi_i` carried by the evolution (`Phi_0 = r^2 phi_0`,
//!   `Phi_+-1 = r f^{1/2} phi_+-1`);
//! * electric and magnetic frame components.
//!
//! The null decomposition is not stored separately: `rho = Re phi_0`, `sigma = Im phi_0`.

use crate::background::{Background, RadialGrid, Radius};
use crate::error::AnalysisError;
use crate::solver::PriceState;
use crate::spectral::{spin_harmonic, HarmonicIndex, SpinWeight};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpinorTriple {
    pub phi1: Complex64,
    pub phi0: Complex64,
    pub phim1: Complex64,
}

impl SpinorTriple {
    /// `|phi_1|^2 + 2|phi_0|^2 + |phi_-1|^2`.
    pub fn energy_density(&self) -> f64 {
        self.phi1.norm_sqr() + 2.0 * self.phi0.norm_sqr() + self.phim1.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EbComponents {
    pub e_r: f64,
    pub e_theta: f64,
    pub e_phi: f64,
    pub b_r: f64,
    pub b_theta: f64,
    pub b_phi: f64,
}

impl EbComponents {
    pub fn e_squared(&self) -> f64 {
        self.e_r * self.e_r + self.e_theta * self.e_theta + self.e_phi * self.e_phi
    }
    pub fn b_squared(&self) -> f64 {
        self.b_r * self.b_r + self.b_theta * self.b_theta + self.b_phi * self.b_phi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoordinateTriple {
    pub cap1: Complex64,
    pub cap0: Complex64,
    pub capm1: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StaticCharge {
    pub q_e: f64,
    pub q_b: f64,
}

impl StaticCharge {
    /// Closed-form T-energy `pi (q_E^2 + q_B^2) / M` over the whole exterior.
    pub fn t_energy(&self, bg: &Background) -> f64 {
        PI * (self.q_e * self.q_e + self.q_b * self.q_b) / bg.mass()
    }

    /// Monopole amplitude `a_00` of `Phi_0 = q_E + i q_B`, i.e. `sqrt(4 pi) (q_E + i q_B)`.
    pub fn monopole_amplitude(&self) -> Complex64 {
        (4.0 * PI).sqrt() * Complex64::new(self.q_e, self.q_b)
    }
}

pub fn phi_from_eb(eb: &EbComponents) -> SpinorTriple {
    SpinorTriple {
        phi1: Complex64::new(eb.e_theta + eb.b_phi, eb.e_phi - eb.b_theta),
        phi0: Complex64::new(eb.e_r, eb.b_r),
        phim1: Complex64::new(eb.e_theta - eb.b_phi, -(eb.e_phi + eb.b_theta)),
    }
}

pub fn eb_from_phi(t: &SpinorTriple) -> EbComponents {
    let (p, q) = (t.phi1.re, t.phi1.im);
    let (u, v) = (t.phim1.re, t.phim1.im);
    EbComponents {
        e_r: t.phi0.re,
        b_r: t.phi0.im,
        e_theta: 0.5 * (p + u),
        b_phi: 0.5 * (p - u),
        e_phi: 0.5 * (q - v),
        b_theta: -0.5 * (q + v),
    }
}

pub fn capital_from_small(t: &SpinorTriple, radius: Radius) -> CoordinateTriple {
    let r = radius.areal;
    let side = r * radius.lapse().sqrt();
    CoordinateTriple {
        cap1: t.phi1 * side,
        cap0: t.phi0 * (r * r),
        capm1: t.phim1 * side,
    }
}

pub fn small_from_capital(c: &CoordinateTriple, radius: Radius) -> SpinorTriple {
    let r = radius.areal;
    let side = r * radius.lapse().sqrt();
    SpinorTriple {
        phi1: c.cap1 / side,
        phi0: c.cap0 / (r * r),
        phim1: c.capm1 / side,
    }
}

/// `(T(l,l), T(l,n), T(n,n)) = (|phi_1|^2, |phi_0|^2, |phi_-1|^2)`.
pub fn null_stress_components(t: &SpinorTriple) -> (f64, f64, f64) {
    (t.phi1.norm_sqr(), t.phi0.norm_sqr(), t.phim1.norm_sqr())
}

/// Static Coulomb-type solution: `phi_0 = (q_E + i q_B)/r^2`, `phi_+-1 = 0`.
pub fn static_solution(charge: &StaticCharge, rs: f64, bg: &Background) -> Result<SpinorTriple, crate::error::BackgroundError> {
    let r = bg.r_from_tortoise(rs)?;
    Ok(static_solution_at(charge, r))
}

pub fn static_solution_at(charge: &StaticCharge, r: f64) -> SpinorTriple {
    SpinorTriple {
        phi0: Complex64::new(charge.q_e, charge.q_b) / (r * r),
        ..Default::default()
    }
}

/// Modal amplitudes `(b, a, c)` of one harmonic at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalSample {
    pub index: HarmonicIndex,
    pub b: Complex64,
    pub a: Complex64,
    pub c: Complex64,
}

/// Sums the modes at direction `(theta, phi)` into coordinate components.
pub fn coordinate_components(samples: &[ModalSample], theta: f64, phi: f64) -> CoordinateTriple {
    let mut out = CoordinateTriple::default();
    for s in samples {
        let (l, m) = (s.index.l, s.index.m);
        out.cap0 += s.a * spin_harmonic(SpinWeight::Zero, l, m, theta, phi);
        if l > 0 {
            out.cap1 += s.b * spin_harmonic(SpinWeight::Plus, l, m, theta, phi);
            out.capm1 += s.c * spin_harmonic(SpinWeight::Minus, l, m, theta, phi);
        }
    }
    out
}

pub fn reconstruct_from_samples(samples: &[ModalSample], theta: f64, phi: f64, radius: Radius) -> SpinorTriple {
    small_from_capital(&coordinate_components(samples, theta, phi), radius)
}

/// Interpolates every state at `rs` and assembles the spinor components at `(theta, phi)`.
pub fn reconstruct_point(
    states: &[PriceState],
    grid: &RadialGrid,
    theta: f64,
    phi: f64,
    rs: f64,
) -> Result<SpinorTriple, AnalysisError> {
    let radius = grid.background().radius(rs).map_err(|_| AnalysisError::OutsideGrid(rs))?;
    let samples = states
        .iter()
        .map(|s| s.sample(grid, rs).ok_or(AnalysisError::OutsideGrid(rs)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reconstruct_from_samples(&samples, theta, phi, radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_electric() {
        let eb = EbComponents { e_r: 1.0, ..Default::default() };
        let t = phi_from_eb(&eb);
        assert_eq!(t.phi0, Complex64::new(1.0, 0.0));
        assert_eq!(t.phi1, Complex64::new(0.0, 0.0));
        assert_eq!(t.phim1, Complex64::new(0.0, 0.0));
        assert_eq!(phi_from_eb(&EbComponents::default()), SpinorTriple::default());
    }

    #[test]
    fn inverse_examples() {
        let t = SpinorTriple { phi0: Complex64::new(0.0, 1.0), ..Default::default() };
        assert_eq!(eb_from_phi(&t), EbComponents { b_r: 1.0, ..Default::default() });
        let one = Complex64::new(1.0, 0.0);
        let t = SpinorTriple { phi1: one, phim1: one, ..Default::default() };
        assert_eq!(eb_from_phi(&t), EbComponents { e_theta: 1.0, ..Default::default() });
    }

    #[test]
    fn capital_weights() {
        let bg = Background::default();
        let radius = bg.radius(0.0).unwrap();
        let t = SpinorTriple { phi0: Complex64::new(1.0, 0.0), ..Default::default() };
        assert!((capital_from_small(&t, radius).cap0.re - 9.0).abs() < 1e-12);
        let t = SpinorTriple { phi1: Complex64::new(1.0, 0.0), ..Default::default() };
        let deep = bg.radius(-80.0).unwrap();
        assert!(capital_from_small(&t, deep).cap1.norm() < 1e-8);
    }

    #[test]
    fn stress_components() {
        let t = SpinorTriple { phi1: Complex64::new(1.0, 0.0), ..Default::default() };
        assert_eq!(null_stress_components(&t), (1.0, 0.0, 0.0));
        let t = SpinorTriple { phi0: Complex64::new(3.0, 4.0), ..Default::default() };
        assert_eq!(null_stress_components(&t).1, 25.0);
    }

    #[test]
    fn static_field_at_horizon() {
        let charge = StaticCharge { q_e: 1.0, q_b: 0.0 };
        let bg = Background::default();
        let t = static_solution(&charge, -200.0, &bg).unwrap();
        assert!((t.phi0.re - 0.25).abs() < 1e-12);
        assert_eq!(static_solution(&StaticCharge::default(), 1.0, &bg).unwrap(), SpinorTriple::default());
        assert!((charge.t_energy(&bg) - PI).abs() < 1e-15);
    }

    #[test]
    fn dipole_reconstruction() {
        let bg = Background::default();
        let radius = bg.radius(4.0).unwrap();
        let idx = HarmonicIndex::new(1, 0).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        let s = ModalSample { index: idx, b: zero, a: Complex64::new(1.0, 0.0), c: zero };
        let theta = 0.9;
        let t = reconstruct_from_samples(&[s], theta, 0.2, radius);
        let expected = (3.0 / (4.0 * PI)).sqrt() * theta.cos() / radius.areal.powi(2);
        assert!((t.phi0.re - expected).abs() < 1e-14);
        assert_eq!(reconstruct_from_samples(&[], theta, 0.2, radius), SpinorTriple::default());
    }
}
