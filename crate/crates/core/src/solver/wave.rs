use super::rk4::Rk4;
use super::{check_cfl, HarmonicWaveState};
use crate::background::RadialGrid;
use crate::error::SolverError;
use std::mem::take;

/// Largest accepted `dt / h`; RK4 with the central Laplacian is stable up to `sqrt(2)`.
pub const WAVE_CFL_LIMIT: f64 = 0.9;

/// Stepper for `a_tt = a_rsrs - V_l a` with outgoing boundary nodes.
#[derive(Debug, Clone)]
pub struct WaveSolver {
    potential: Vec<f64>,
    h: f64,
    rk: Rk4,
    steps: u64,
}

impl WaveSolver {
    pub fn new(grid: &RadialGrid, l: u32) -> Self {
        WaveSolver {
            potential: grid.potential(l).into_owned(),
            h: grid.h(),
            rk: Rk4::new(4, grid.len()),
            steps: 0,
        }
    }

    /// Replaces the potential, e.g. to evolve the free wave equation in tests.
    pub fn with_potential(mut self, potential: Vec<f64>) -> Self {
        self.potential = potential;
        self
    }

    pub fn step(&mut self, state: &mut HarmonicWaveState, dt: f64) -> Result<(), SolverError> {
        check_cfl(dt, self.h, WAVE_CFL_LIMIT)?;
        let n = self.potential.len();
        if state.a.len() != n {
            return Err(SolverError::LengthMismatch { expected: n, got: state.a.len() });
        }
        let mut y = vec![take(&mut state.a.re), take(&mut state.a.im), take(&mut state.adot.re), take(&mut state.adot.im)];
        let (v, h) = (&self.potential, self.h);
        self.rk.step(&mut y, dt, |y, out| {
            for part in 0..2 {
                let (a, adot) = (&y[part], &y[part + 2]);
                let (left, right) = out.split_at_mut(2);
                wave_rhs(a, adot, v, h, &mut left[part], &mut right[part]);
            }
        });
        let mut it = y.into_iter();
        state.a.re = it.next().unwrap_or_default();
        state.a.im = it.next().unwrap_or_default();
        state.adot.re = it.next().unwrap_or_default();
        state.adot.im = it.next().unwrap_or_default();
        state.t += dt;
        self.steps += 1;
        if !(state.a.is_finite() && state.adot.is_finite()) {
            return Err(SolverError::NonFinite { l: state.mode.l, m: state.mode.m, step: self.steps });
        }
        Ok(())
    }
}

fn wave_rhs(a: &[f64], adot: &[f64], v: &[f64], h: f64, da: &mut [f64], dadot: &mut [f64]) {
    let n = a.len();
    let inv_h2 = 1.0 / (h * h);
    let inv_2h = 0.5 / h;
    da[1..n - 1].copy_from_slice(&adot[1..n - 1]);
    for i in 1..n - 1 {
        dadot[i] = (a[i + 1] - 2.0 * a[i] + a[i - 1]) * inv_h2 - v[i] * a[i];
    }
    // Left node moves toward the horizon: u_t = u_rs. Right node: u_t = -u_rs.
    da[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) * inv_2h;
    dadot[0] = (-3.0 * adot[0] + 4.0 * adot[1] - adot[2]) * inv_2h;
    da[n - 1] = -(3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) * inv_2h;
    dadot[n - 1] = -(3.0 * adot[n - 1] - 4.0 * adot[n - 2] + adot[n - 3]) * inv_2h;
}

/// One RK4 step with a fresh solver; prefer [`WaveSolver`] inside loops.
pub fn step_wave(state: &mut HarmonicWaveState, grid: &RadialGrid, dt: f64) -> Result<(), SolverError> {
    WaveSolver::new(grid, state.mode.l).step(state, dt)
}
