//! Radial multiplier `gamma = g d_rs + (d_rs g)/2` with `g = t g~(rs) chi(rs/t)`.
//!
//! For `u_tt = u_rsrs - V u` the multiplier gives
//! `-2 dE_gamma/dt = int [2 g' |u'|^2 - V' g |u|^2 - g''' |u|^2 / 2 - 2 g_t Re(u_t* u') - g_t' Re(u_t* u)]`
//! with `E_gamma = int Re(u_t* (g u' + g' u / 2))`. The bulk is reported in five groups;
//! the first, `t chi (2 g~' |u'|^2 - V' g~ |u|^2)`, is pointwise nonnegative. The part of
//! `g'''` containing `g~'''` (singular at `rs = 0` when `sigma < 2`) is integrated by parts
//! once so every integrand stays bounded.

use super::derivative;
use crate::background::RadialGrid;
use crate::solver::HarmonicWaveState;
use thiserror::Error;

pub const MORAWETZ_GROUPS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiplierError {
    #[error("energetics: multiplier b must be positive, got {0}")]
    InvalidB(f64),
    #[error("energetics: multiplier exponent must lie in (1, 2], got {0}")]
    InvalidSigma(f64),
    #[error("energetics: multiplier start time must be at least 1, got {0}")]
    InvalidStart(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierConfig {
    pub b: f64,
    pub sigma: f64,
    /// First time at which the identity is accumulated.
    pub start_time: f64,
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        MultiplierConfig { b: 0.1, sigma: 1.5, start_time: 10.0 }
    }
}

impl MultiplierConfig {
    pub fn validate(&self) -> Result<(), MultiplierError> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(MultiplierError::InvalidB(self.b));
        }
        if !(self.sigma > 1.0 && self.sigma <= 2.0) {
            return Err(MultiplierError::InvalidSigma(self.sigma));
        }
        if !(self.start_time >= 1.0 && self.start_time.is_finite()) {
            return Err(MultiplierError::InvalidStart(self.start_time));
        }
        Ok(())
    }
}

/// Septic smoothstep and its first three derivatives; C^3 at both ends.
fn smoothstep7(x: f64) -> [f64; 4] {
    if x <= 0.0 {
        return [0.0; 4];
    }
    if x >= 1.0 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let x2 = x * x;
    let x3 = x2 * x;
    [
        x3 * x * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x3),
        140.0 * x3 * (1.0 - x).powi(3),
        420.0 * x2 * (1.0 - x).powi(2) * (1.0 - 2.0 * x),
        840.0 * x * (1.0 - x) * (1.0 - 5.0 * x + 5.0 * x2),
    ]
}

/// Cutoff in `s = rs/t`: 1 on `|s| <= 1/2`, 0 for `|s| >= 3/4`; returns `[chi, chi', chi'', chi''']`.
pub fn light_cone_cutoff(s: f64) -> [f64; 4] {
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    let x = (0.75 - s.abs()) * 4.0;
    let [v, d1, d2, d3] = smoothstep7(x);
    [v, -4.0 * sign * d1, 16.0 * d2, -64.0 * sign * d3]
}

/// Boundary term and bulk groups at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MorawetzSample {
    pub t: f64,
    pub e_gamma: f64,
    pub groups: [f64; MORAWETZ_GROUPS],
    /// Most negative pointwise value of the leading group's density.
    pub leading_min_density: f64,
}

/// Multiplier weights `g~, g~', g~''` precomputed on a grid.
#[derive(Debug, Clone)]
pub struct Multiplier {
    config: MultiplierConfig,
    gt: Vec<f64>,
    gt1: Vec<f64>,
    gt2: Vec<f64>,
}

fn gauss_legendre_8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for k in 0..4 {
        s += W[k] * (f(c - h * X[k]) + f(c + h * X[k]));
    }
    s * h
}

impl Multiplier {
    pub fn new(grid: &RadialGrid, config: MultiplierConfig) -> Result<Self, MultiplierError> {
        config.validate()?;
        let (b, sigma) = (config.b, config.sigma);
        let dg = |z: f64| 1.0 / (1.0 + b * z.abs().powf(sigma));
        let rs = grid.rs();
        // g~ is odd; accumulate |rs| in increasing order.
        let mut order: Vec<usize> = (0..rs.len()).collect();
        order.sort_by(|&i, &j| rs[i].abs().total_cmp(&rs[j].abs()));
        let mut gt = vec![0.0; rs.len()];
        let (mut prev, mut acc) = (0.0_f64, 0.0_f64);
        for &i in &order {
            let x = rs[i].abs();
            let panels = ((x - prev) / 0.25).ceil().max(1.0) as usize;
            let w = (x - prev) / panels as f64;
            for p in 0..panels {
                acc += gauss_legendre_8(dg, prev + p as f64 * w, prev + (p + 1) as f64 * w);
            }
            prev = x;
            gt[i] = rs[i].signum() * acc;
        }
        let gt1 = rs.iter().map(|&y| dg(y)).collect();
        let gt2 = rs
            .iter()
            .map(|&y| {
                let ay = y.abs();
                -b * sigma * y.signum() * ay.powf(sigma - 1.0) / (1.0 + b * ay.powf(sigma)).powi(2)
            })
            .collect();
        Ok(Multiplier { config, gt, gt1, gt2 })
    }

    pub fn config(&self) -> MultiplierConfig {
        self.config
    }

    pub fn g_tilde(&self) -> &[f64] {
        &self.gt
    }

    /// Evaluates `E_gamma` and the bulk groups for the state at its own time.
    pub fn sample(&self, state: &HarmonicWaveState, grid: &RadialGrid) -> MorawetzSample {
        let t = state.t;
        let mut out = MorawetzSample { t, ..Default::default() };
        if t <= 0.0 {
            return out;
        }
        let ll = state.mode.casimir();
        let dw = grid.weight_derivative();
        let rs = grid.rs();
        let (dr, di) = derivative(&state.a.re, &state.a.im, grid.h());
        let n = grid.len();
        let mut eg = vec![0.0; n];
        let mut groups = vec![[0.0; MORAWETZ_GROUPS]; n];
        let mut leading_min: f64 = 0.0;
        for i in 0..n {
            let s = rs[i] / t;
            if s.abs() >= 0.75 {
                continue;
            }
            let [chi, chi1, chi2, chi3] = light_cone_cutoff(s);
            let (g0, g1, g2) = (self.gt[i], self.gt1[i], self.gt2[i]);
            let (ar, ai) = (state.a.re[i], state.a.im[i]);
            let (tr, ti) = (state.adot.re[i], state.adot.im[i]);
            let u2 = ar * ar + ai * ai;
            let d2 = dr[i] * dr[i] + di[i] * di[i];
            let ut_ud = tr * dr[i] + ti * di[i];
            let ut_u = tr * ar + ti * ai;
            let u_ud = ar * dr[i] + ai * di[i];
            let g = t * g0 * chi;
            let gp = t * g1 * chi + g0 * chi1;
            eg[i] = g * ut_ud + 0.5 * gp * ut_u;
            let vp = ll * dw[i];
            let lead = t * chi * (2.0 * g1 * d2 - vp * g0 * u2);
            leading_min = leading_min.min(lead);
            let gdot = g0 * (chi - s * chi1);
            let gdot_p = g1 * (chi - s * chi1) - g0 * s * chi2 / t;
            groups[i] = [
                lead,
                2.0 * g0 * chi1 * d2,
                -(g2 * chi1 + 1.5 * g1 * chi2 / t + 0.5 * g0 * chi3 / (t * t)) * u2 + t * g2 * chi * u_ud,
                -2.0 * gdot * ut_ud,
                -gdot_p * ut_u,
            ];
        }
        out.e_gamma = grid.integrate(eg);
        for k in 0..MORAWETZ_GROUPS {
            out.groups[k] = grid.integrate(groups.iter().map(|g| g[k]));
        }
        out.leading_min_density = leading_min;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::Background;

    #[test]
    fn cutoff_profile() {
        assert_eq!(light_cone_cutoff(0.3)[0], 1.0);
        assert_eq!(light_cone_cutoff(-0.5)[0], 1.0);
        assert_eq!(light_cone_cutoff(0.75)[0], 0.0);
        assert_eq!(light_cone_cutoff(-0.9), [0.0; 4]);
        // Derivatives against central differences.
        let h = 1e-5;
        for &s in &[0.55, 0.6, -0.62, 0.7] {
            for k in 0..3 {
                let fd = (light_cone_cutoff(s + h)[k] - light_cone_cutoff(s - h)[k]) / (2.0 * h);
                assert!((fd - light_cone_cutoff(s)[k + 1]).abs() < 1e-4 * (1.0 + fd.abs()), "s={s} k={k}");
            }
        }
    }

    #[test]
    fn weight_is_antiderivative() {
        let grid = RadialGrid::new(Background::default(), -50.0, 50.0, 1001).unwrap();
        let m = Multiplier::new(&grid, MultiplierConfig::default()).unwrap();
        let h = grid.h();
        for i in 1..grid.len() - 1 {
            let fd = (m.gt[i + 1] - m.gt[i - 1]) / (2.0 * h);
            assert!((fd - m.gt1[i]).abs() < 5e-3, "i={i} fd={fd} exact={} g={}", m.gt1[i], m.gt[i]);
        }
        let mid = grid.node_of(0.0).unwrap();
        assert_eq!(m.gt[mid], 0.0);
        assert!((m.gt[mid + 7] + m.gt[mid - 7]).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = [
            MultiplierConfig { b: 0.0, ..Default::default() },
            MultiplierConfig { sigma: 1.0, ..Default::default() },
            MultiplierConfig { sigma: 2.5, ..Default::default() },
            MultiplierConfig { start_time: 0.5, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err());
        }
    }
}
