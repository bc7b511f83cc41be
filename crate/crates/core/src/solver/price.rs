use super::rk4::Rk4;
use super::stencil::d1_fourth_order;
use super::{check_cfl, PriceState};
use crate::background::RadialGrid;
use crate::error::SolverError;
use crate::spectral::ladder_coefficients;
use std::mem::take;

/// Largest accepted `dt / h`; RK4 with second-order upwinding is stable up to about 0.696.
pub const PRICE_CFL_LIMIT: f64 = 0.69;

/// Rate at which violations of `a_rs = c_down (b + c) / 2` are damped.
///
/// Without it the semi-discrete system keeps a static constraint-violating remnant
/// (`b = c`, `a` time independent) seeded by truncation error, which masks late-time tails.
pub const CONSTRAINT_DAMPING: f64 = 0.5;

/// Stepper for the transport system
/// `b_t = b_rs - c_up W a`, `c_t = -c_rs + c_up W a`, `a_t = c_down (b - c) / 2`.
#[derive(Debug, Clone)]
pub struct PriceSolver {
    /// `c_up W` per node.
    coupling: Vec<f64>,
    c_down: f64,
    damping: f64,
    h: f64,
    rk: Rk4,
    steps: u64,
}

impl PriceSolver {
    pub fn new(grid: &RadialGrid, l: u32) -> Self {
        let c = ladder_coefficients(l);
        PriceSolver {
            coupling: grid.weight().iter().map(|w| c.c_up * w).collect(),
            c_down: c.c_down,
            damping: if l == 0 { 0.0 } else { CONSTRAINT_DAMPING },
            h: grid.h(),
            rk: Rk4::new(6, grid.len()),
            steps: 0,
        }
    }

    /// Zeroes both ladder coefficients, leaving pure advection of `b` and `c`.
    pub fn decoupled(mut self) -> Self {
        self.coupling.iter_mut().for_each(|x| *x = 0.0);
        self.c_down = 0.0;
        self.damping = 0.0;
        self
    }

    /// Overrides the constraint damping rate; zero recovers the bare transport system.
    pub fn with_damping(mut self, rate: f64) -> Self {
        self.damping = if self.c_down == 0.0 { 0.0 } else { rate };
        self
    }

    /// `d_t` of the state under the semi-discrete system.
    pub fn time_derivative(&self, state: &PriceState) -> PriceState {
        let mut out = PriceState::zeros(state.mode, state.a.len());
        out.t = state.t;
        for p in 0..2 {
            let (b, a, c) = if p == 0 {
                (&state.b.re, &state.a.re, &state.c.re)
            } else {
                (&state.b.im, &state.a.im, &state.c.im)
            };
            let (ob, oa, oc) = if p == 0 {
                (&mut out.b.re, &mut out.a.re, &mut out.c.re)
            } else {
                (&mut out.b.im, &mut out.a.im, &mut out.c.im)
            };
            price_rhs(b, a, c, &self.coupling, self.c_down, self.damping, self.h, ob, oa, oc);
        }
        out
    }

    pub fn step(&mut self, state: &mut PriceState, dt: f64) -> Result<(), SolverError> {
        check_cfl(dt, self.h, PRICE_CFL_LIMIT)?;
        let n = self.coupling.len();
        if state.a.len() != n {
            return Err(SolverError::LengthMismatch { expected: n, got: state.a.len() });
        }
        let mut y = vec![
            take(&mut state.b.re),
            take(&mut state.b.im),
            take(&mut state.a.re),
            take(&mut state.a.im),
            take(&mut state.c.re),
            take(&mut state.c.im),
        ];
        let (k, lam, kappa, h) = (&self.coupling, self.c_down, self.damping, self.h);
        self.rk.step(&mut y, dt, |y, out| {
            let (ob, rest) = out.split_at_mut(2);
            let (oa, oc) = rest.split_at_mut(2);
            for p in 0..2 {
                price_rhs(&y[p], &y[2 + p], &y[4 + p], k, lam, kappa, h, &mut ob[p], &mut oa[p], &mut oc[p]);
            }
        });
        let mut it = y.into_iter();
        for slot in [
            &mut state.b.re,
            &mut state.b.im,
            &mut state.a.re,
            &mut state.a.im,
            &mut state.c.re,
            &mut state.c.im,
        ] {
            *slot = it.next().unwrap_or_default();
        }
        state.t += dt;
        self.steps += 1;
        if !(state.a.is_finite() && state.b.is_finite() && state.c.is_finite()) {
            return Err(SolverError::NonFinite { l: state.mode.l, m: state.mode.m, step: self.steps });
        }
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn price_rhs(
    b: &[f64],
    a: &[f64],
    c: &[f64],
    coupling: &[f64],
    c_down: f64,
    damping: f64,
    h: f64,
    db: &mut [f64],
    da: &mut [f64],
    dc: &mut [f64],
) {
    let n = a.len();
    let inv = 0.5 / h;
    for i in 0..n {
        da[i] = 0.5 * c_down * (b[i] - c[i]);
    }
    // b moves toward decreasing rs: upwind from the right; the right end is inflow.
    for i in 0..n - 2 {
        db[i] = (-3.0 * b[i] + 4.0 * b[i + 1] - b[i + 2]) * inv - coupling[i] * a[i];
    }
    db[n - 2] = (b[n - 1] - b[n - 3]) * inv - coupling[n - 2] * a[n - 2];
    db[n - 1] = -coupling[n - 1] * a[n - 1];
    // c moves toward increasing rs: upwind from the left; the left end is inflow.
    dc[0] = coupling[0] * a[0];
    dc[1] = -(c[2] - c[0]) * inv + coupling[1] * a[1];
    for i in 2..n {
        dc[i] = -(3.0 * c[i] - 4.0 * c[i - 1] + c[i - 2]) * inv + coupling[i] * a[i];
    }
    if damping != 0.0 {
        // d_t (b + c) picks up -damping * C, so C = a_rs - c_down (b + c) / 2 decays.
        let s = damping / c_down;
        for i in 0..n {
            let da_rs = match i {
                0 => (-3.0 * a[0] + 4.0 * a[1] - a[2]) * inv,
                _ if i == n - 1 => (3.0 * a[i] - 4.0 * a[i - 1] + a[i - 2]) * inv,
                _ => (a[i + 1] - a[i - 1]) * inv,
            };
            let k = s * (da_rs - 0.5 * c_down * (b[i] + c[i]));
            db[i] += k;
            dc[i] += k;
        }
    }
}

/// One RK4 step with a fresh solver; prefer [`PriceSolver`] inside loops.
pub fn step_price(state: &mut PriceState, grid: &RadialGrid, dt: f64) -> Result<(), SolverError> {
    PriceSolver::new(grid, state.mode.l).step(state, dt)
}

/// L2 norm over interior nodes of `a_rs - c_down (b + c) / 2`, with a fourth-order `a_rs`.
pub fn constraint_residual(state: &PriceState, grid: &RadialGrid) -> f64 {
    let n = grid.len();
    let lam = ladder_coefficients(state.mode.l).c_down;
    let mut d = vec![0.0; n];
    let mut sum = 0.0;
    for (a, b, c) in [(&state.a.re, &state.b.re, &state.c.re), (&state.a.im, &state.b.im, &state.c.im)] {
        d1_fourth_order(a, grid.h(), &mut d);
        for i in 2..n - 2 {
            let r = d[i] - 0.5 * lam * (b[i] + c[i]);
            sum += r * r;
        }
    }
    (sum * grid.h()).sqrt()
}
