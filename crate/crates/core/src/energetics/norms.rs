//! Initial-data norms built from time and rotation derivatives.

use super::{mode_k_energy, mode_t_energy};
use crate::background::RadialGrid;
use crate::fields::{reconstruct_from_samples, ModalSample};
use crate::solver::{PriceSolver, PriceState};
use std::f64::consts::PI;

/// Sums of conformal and T-energies of derivative fields on the initial slice.
///
/// Rotation derivatives act on a degree-l mode by the Casimir `l(l+1)` per application
/// (summed over the three generators), so their energies are `(l(l+1))^k` times the mode's.
/// Time derivatives apply the semi-discrete transport operator `k` times.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialNormReport {
    pub conformal_order: usize,
    pub energy_order: usize,
    /// `sum_{k <= K} E^K[d_t^k F]`.
    pub conformal_time: f64,
    /// `sum_{k <= K} E^K[Omega^k F]`.
    pub conformal_rotation: f64,
    /// `sum_{k <= K'} E^T[d_t^k F]`.
    pub energy_time: f64,
    /// `sum_{k <= K'} E^T[Omega^k F]`.
    pub energy_rotation: f64,
    /// `sup r^{5/2} max_i |phi_i|` over the slice, sampled on a 32 x 16 angular grid.
    pub sup_weighted: f64,
}

impl InitialNormReport {
    pub fn compute(states: &[PriceState], grid: &RadialGrid, conformal_order: usize, energy_order: usize) -> Self {
        let top = conformal_order.max(energy_order);
        let (mut ct, mut cr, mut et, mut er) = (0.0, 0.0, 0.0, 0.0);
        for state in states {
            let casimir = state.mode.casimir();
            let (k0, t0) = (mode_k_energy(state, grid).value, mode_t_energy(state, grid));
            let solver = PriceSolver::new(grid, state.mode.l);
            let mut current = state.clone();
            for k in 0..=top {
                if k > 0 {
                    current = solver.time_derivative(&current);
                }
                let k_energy = mode_k_energy(&current, grid).value;
                let t_energy = mode_t_energy(&current, grid);
                if k <= conformal_order {
                    ct += k_energy;
                    cr += casimir.powi(k as i32) * k0;
                }
                if k <= energy_order {
                    et += t_energy;
                    er += casimir.powi(k as i32) * t0;
                }
            }
        }
        InitialNormReport {
            conformal_order,
            energy_order,
            conformal_time: ct,
            conformal_rotation: cr,
            energy_time: et,
            energy_rotation: er,
            sup_weighted: sup_weighted(states, grid),
        }
    }

    /// Orders used for the surface-integral bound (one and five derivatives).
    pub fn surface_bound(states: &[PriceState], grid: &RadialGrid) -> Self {
        Self::compute(states, grid, 1, 5)
    }

    /// Orders used for the pointwise bound (four and eight derivatives).
    pub fn pointwise_bound(states: &[PriceState], grid: &RadialGrid) -> Self {
        Self::compute(states, grid, 4, 8)
    }
}

fn sup_weighted(states: &[PriceState], grid: &RadialGrid) -> f64 {
    if states.is_empty() {
        return 0.0;
    }
    let bg = grid.background();
    let mut best: f64 = 0.0;
    let stride = (grid.len() / 512).max(1);
    for i in (0..grid.len()).step_by(stride) {
        let rs = grid.rs()[i];
        let Ok(radius) = bg.radius(rs) else { continue };
        let samples: Vec<ModalSample> = states
            .iter()
            .map(|s| ModalSample { index: s.mode, b: s.b.get(i), a: s.a.get(i), c: s.c.get(i) })
            .collect();
        let weight = radius.areal.powf(2.5);
        for it in 0..32 {
            let theta = PI * (it as f64 + 0.5) / 32.0;
            for ip in 0..16 {
                let phi = 2.0 * PI * ip as f64 / 16.0;
                let t = reconstruct_from_samples(&samples, theta, phi, radius);
                let m = t.phi1.norm().max(t.phi0.norm()).max(t.phim1.norm());
                best = best.max(weight * m);
            }
        }
    }
    best
}
