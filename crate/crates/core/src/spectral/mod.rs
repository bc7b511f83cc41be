//! Harmonic reduction of the angular operators `M = d_theta + (i/sin) d_phi` and `M-bar + cot`.
//!
//! Conventions: `Y` is the usual Condon-Shortley harmonic, the spin +1 harmonic is
//! `Y_1 = -M Y / lambda` and the spin -1 harmonic is `Y_-1 = -M-bar Y / lambda`.
//! With these, `(M-bar + cot) Y_1 = lambda Y` and `(M + cot) Y_-1 = lambda Y`, so both
//! ladder coefficients equal `lambda = sqrt(l(l+1))`.

mod harmonics;
mod oracle;

pub use harmonics::{spin_harmonic, SpinWeight};
pub use oracle::{angular_oracle_residual, Jet};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("spectral: |m| = {m} exceeds l = {l}")]
    InvalidOrder { l: u32, m: i32 },
    #[error("spectral: reduced system for l = {l} composes to {product} W a, expected {expected} W a")]
    Inconsistent { l: u32, product: f64, expected: f64 },
}

/// Harmonic degree and order with the ladder eigenvalue `lambda = sqrt(l(l+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicIndex {
    pub l: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(l: u32, m: i32) -> Result<Self, SpectralError> {
        if m.unsigned_abs() > l {
            return Err(SpectralError::InvalidOrder { l, m });
        }
        Ok(HarmonicIndex { l, m })
    }

    pub fn lambda(&self) -> f64 {
        lambda(self.l)
    }

    /// `l(l+1)`, exact in floating point.
    pub fn casimir(&self) -> f64 {
        f64::from(self.l) * f64::from(self.l + 1)
    }
}

pub fn lambda(l: u32) -> f64 {
    (f64::from(l) * f64::from(l + 1)).sqrt()
}

/// Coefficients of the reduced transport system.
///
/// With `L = d_t + d_rs`, `N = d_t - d_rs` and `W = (1 - 2M/r)/r^2` the mode equations are
/// `L a = c_down b`, `N a = -c_down c`, `N b = -c_up W a`, `L c = c_up W a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderCoefficients {
    pub c_up: f64,
    pub c_down: f64,
}

pub fn ladder_coefficients(l: u32) -> LadderCoefficients {
    let lam = lambda(l);
    LadderCoefficients { c_up: lam, c_down: lam }
}

/// Signed coefficients of the four transport relations, in the order
/// `L a = k0 b`, `N a = k1 c`, `N b = k2 W a`, `L c = k3 W a`.
pub fn transport_coefficients(l: u32) -> [f64; 4] {
    let c = ladder_coefficients(l);
    [c.c_down, -c.c_down, -c.c_up, c.c_up]
}

/// Composes the transport relations along both characteristic orderings and checks that
/// each reproduces `N L a = L N a = -l(l+1) W a`, i.e. the spin-reduced wave equation.
pub fn consistency_check(l: u32) -> Result<(), SpectralError> {
    let [la, na, nb, lc] = transport_coefficients(l);
    let expected = -(f64::from(l) * f64::from(l + 1));
    for product in [la * nb, na * lc] {
        if (product - expected).abs() > 1e-12 * expected.abs().max(1.0) {
            return Err(SpectralError::Inconsistent { l, product, expected });
        }
    }
    Ok(())
}
