//! Method-of-lines evolution of a single harmonic mode.
//!
//! Two formulations are provided: the second-order scalar wave equation for the zero-weight
//! amplitude ([`WaveSolver`]) and the first-order transport system for the triple
//! `(b, a, c)` of spin weights `(+1, 0, -1)` ([`PriceSolver`]). Both use RK4 in time and
//! second-order differences in space.

mod init;
mod price;
mod rk4;
pub mod run;
pub mod stencil;
mod wave;

pub use init::{init_price_from_wave, init_wave, InitialDataSpec, InitialKind, TimeSymmetry};
pub use price::{constraint_residual, step_price, PriceSolver, PRICE_CFL_LIMIT};
pub use wave::{step_wave, WaveSolver, WAVE_CFL_LIMIT};

use crate::background::RadialGrid;
use crate::fields::ModalSample;
use crate::spectral::HarmonicIndex;
use num_complex::Complex64;

/// Complex array stored as two real arrays.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexField {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexField {
    pub fn zeros(n: usize) -> Self {
        ComplexField {
            re: vec![0.0; n],
            im: vec![0.0; n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let mut out = ComplexField::zeros(n);
        for i in 0..n {
            let z = f(i);
            out.re[i] = z.re;
            out.im[i] = z.im;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        Complex64::new(self.re[i], self.im[i])
    }

    /// `|z_i|^2` per node.
    pub fn norm_sqr_iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.re.iter().zip(&self.im).map(|(a, b)| a * a + b * b)
    }

    /// Linear interpolation between nodes `i` and `i + 1`.
    pub fn lerp(&self, i: usize, frac: f64) -> Complex64 {
        self.get(i) * (1.0 - frac) + self.get(i + 1) * frac
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().chain(&self.im).all(|x| x.is_finite())
    }

    /// Trapezoid L2 norm on the grid.
    pub fn l2_norm(&self, grid: &RadialGrid) -> f64 {
        grid.integrate(self.norm_sqr_iter()).sqrt()
    }

    /// Trapezoid L2 norm of `self - other`.
    pub fn l2_distance(&self, other: &ComplexField, grid: &RadialGrid) -> f64 {
        grid.integrate(
            self.re
                .iter()
                .zip(&self.im)
                .zip(other.re.iter().zip(&other.im))
                .map(|((a, b), (c, d))| (a - c).powi(2) + (b - d).powi(2)),
        )
        .sqrt()
    }
}

/// Zero-weight amplitude and its time derivative for one harmonic.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicWaveState {
    pub mode: HarmonicIndex,
    pub t: f64,
    pub a: ComplexField,
    pub adot: ComplexField,
}

impl HarmonicWaveState {
    pub fn zeros(mode: HarmonicIndex, n: usize) -> Self {
        HarmonicWaveState {
            mode,
            t: 0.0,
            a: ComplexField::zeros(n),
            adot: ComplexField::zeros(n),
        }
    }
}

/// Spin `(+1, 0, -1)` amplitudes `(b, a, c)` for one harmonic.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceState {
    pub mode: HarmonicIndex,
    pub t: f64,
    pub b: ComplexField,
    pub a: ComplexField,
    pub c: ComplexField,
}

impl PriceState {
    pub fn zeros(mode: HarmonicIndex, n: usize) -> Self {
        PriceState {
            mode,
            t: 0.0,
            b: ComplexField::zeros(n),
            a: ComplexField::zeros(n),
            c: ComplexField::zeros(n),
        }
    }

    /// Linearly interpolated amplitudes at `rs`, or `None` outside the grid.
    pub fn sample(&self, grid: &RadialGrid, rs: f64) -> Option<ModalSample> {
        let (i, frac) = grid.locate(rs)?;
        Some(ModalSample {
            index: self.mode,
            b: self.b.lerp(i, frac),
            a: self.a.lerp(i, frac),
            c: self.c.lerp(i, frac),
        })
    }
}

/// Validates `dt` against the scheme's stability limit.
pub(crate) fn check_cfl(dt: f64, h: f64, limit: f64) -> Result<(), crate::error::SolverError> {
    if !(dt > 0.0) || dt > limit * h * (1.0 + 1e-12) {
        return Err(crate::error::SolverError::CflViolation {
            dt,
            limit: limit * h,
            cfl: dt / h,
        });
    }
    Ok(())
}
