//! The identity and invariant suite behind `verify`, the Hardy suite and the static regression.

use super::config::{RunConfig, StaticConfig};
use super::io::CheckLine;
use crate::analysis::{conformal_identity_residual, energy_drift, local_decay_ratio, morawetz_identity_residual};
use crate::background::{Background, RadialGrid};
use crate::energetics::{hardy_check, mode_t_energy, unit_bump};
use crate::error::Result;
use crate::fields::StaticCharge;
use crate::solver::run::RunSeries;
use crate::solver::{init_price_from_wave, init_wave, InitialDataSpec, PriceSolver};
use crate::spectral::{angular_oracle_residual, consistency_check, ladder_coefficients, HarmonicIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative drift of the scalar-wave energy accepted by `verify`.
pub const ENERGY_DRIFT_TOLERANCE: f64 = 1e-4;
pub const CONFORMAL_TOLERANCE: f64 = 1e-2;
pub const MORAWETZ_TOLERANCE: f64 = 1e-2;
/// Bound on the local-decay integral in units of the initial energy.
pub const LOCAL_DECAY_BOUND: f64 = 10.0;
/// Largest accepted time derivative of an evolved static solution.
pub const STATIC_DERIVATIVE_TOLERANCE: f64 = 1e-10;
/// Accepted relative error of the static T-energy against `pi q^2 / M`.
pub const STATIC_ENERGY_TOLERANCE: f64 = 2e-3;
pub const ANGULAR_TOLERANCE: f64 = 1e-10;

fn line(name: &str, pass: bool, detail: String) -> CheckLine {
    CheckLine { name: name.to_string(), detail, pass }
}

/// Result of the randomized Hardy suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardySuite {
    pub total: usize,
    pub passed: usize,
    /// Largest `lhs / rhs` seen.
    pub worst_ratio: f64,
}

/// Checks the Hardy inequality on `samples` random Gaussian mixtures.
///
/// Each draw picks `t` in `[20, 200]`, `alpha` in `[0.25, 2]`, and up to four Gaussians
/// with centers in `|rs| <= t/2`, widths in `[0.5, t/4]` and signed amplitudes.
pub fn hardy_suite(samples: usize, seed: u64) -> HardySuite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = HardySuite { total: samples, passed: 0, worst_ratio: 0.0 };
    for _ in 0..samples {
        let t: f64 = rng.gen_range(20.0..200.0);
        let alpha: f64 = rng.gen_range(0.25..2.0);
        let bumps: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let amp = rng.gen_range(0.1..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                (amp, rng.gen_range(-0.5 * t..0.5 * t), rng.gen_range(0.5..0.25 * t))
            })
            .collect();
        let n = ((t / 0.02) as usize) | 1;
        let rs: Vec<f64> = (0..n).map(|i| -0.5 * t + t * i as f64 / (n - 1) as f64).collect();
        let f: Vec<f64> = rs
            .iter()
            .map(|&x| bumps.iter().map(|(a, c, w)| a * (-((x - c) / w).powi(2)).exp()).sum())
            .collect();
        let chi: Vec<f64> = rs.iter().map(|&x| unit_bump(x)).collect();
        let o = hardy_check(&rs, &f, t, alpha, &chi);
        if o.pass {
            out.passed += 1;
        }
        if o.rhs > 0.0 {
            out.worst_ratio = out.worst_ratio.max(o.lhs / o.rhs);
        }
    }
    out
}

/// Static monopole regression: quadrature of `E^T` and the evolved time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticReport {
    pub e_t: f64,
    /// `pi q^2 / M`, the value over the whole exterior.
    pub analytic: f64,
    pub relative_error: f64,
    /// `2 pi q^2 (1/r_min - 1/r_max)`, the value over the truncated interval.
    pub truncated_analytic: f64,
    pub truncated_relative_error: f64,
    /// Largest `|d_t|` of any component over the evolved steps.
    pub max_time_derivative: f64,
    pub pass: bool,
}

pub fn static_check(mass: f64, cfg: &StaticConfig) -> Result<StaticReport> {
    let bg = Background::new(mass)?;
    let grid = RadialGrid::new(bg, bg.tortoise_from_r(cfg.r_min)?, bg.tortoise_from_r(cfg.r_max)?, cfg.n)?;
    let charge = StaticCharge { q_e: cfg.q_e, q_b: cfg.q_b };
    let mode = HarmonicIndex::new(0, 0).expect("l = 0 is valid");
    let wave = init_wave(&InitialDataSpec::static_charge(cfg.q_e, cfg.q_b), &grid, mode)?;
    let mut state = init_price_from_wave(&wave, &grid)?;
    let e_t = mode_t_energy(&state, &grid);
    let analytic = charge.t_energy(&bg);
    let q2 = cfg.q_e * cfg.q_e + cfg.q_b * cfg.q_b;
    let truncated = 2.0 * std::f64::consts::PI * q2 * (1.0 / cfg.r_min - 1.0 / cfg.r_max);
    let mut solver = PriceSolver::new(&grid, 0);
    let dt = 0.5 * grid.h();
    let mut max_dt: f64 = 0.0;
    for _ in 0..cfg.steps {
        let d = solver.time_derivative(&state);
        for f in [&d.b, &d.a, &d.c] {
            max_dt = f.re.iter().chain(&f.im).fold(max_dt, |m, x| m.max(x.abs()));
        }
        solver.step(&mut state, dt)?;
    }
    let rel = |x: f64, y: f64| if y == 0.0 { x.abs() } else { (x - y).abs() / y.abs() };
    let relative_error = rel(e_t, analytic);
    Ok(StaticReport {
        e_t,
        analytic,
        relative_error,
        truncated_analytic: truncated,
        truncated_relative_error: rel(e_t, truncated),
        max_time_derivative: max_dt,
        pass: relative_error <= STATIC_ENERGY_TOLERANCE && max_dt < STATIC_DERIVATIVE_TOLERANCE,
    })
}

/// Runs every enabled identity and invariant check on a finished run.
pub fn verify_suite(cfg: &RunConfig, run: &RunSeries) -> Vec<CheckLine> {
    let mut out = Vec::new();
    let d = &cfg.diagnostics;
    let t_final = run.times.last().copied().unwrap_or(0.0);

    let mut negative = 0usize;
    for m in &run.modes {
        for r in &m.rows {
            negative += [r.e_wave, r.e_conf_wave, r.e_t, r.e_k].iter().filter(|x| **x < 0.0).count();
        }
    }
    out.push(line("energies_nonnegative", negative == 0, format!("{negative} negative samples")));

    if d.energies {
        let drift = energy_drift(run);
        out.push(line(
            "energy_drift",
            drift < ENERGY_DRIFT_TOLERANCE,
            format!("relative drift {drift:e} < {ENERGY_DRIFT_TOLERANCE:e}"),
        ));
    }

    if d.conformal_identity {
        let (t1, t2) = (d.conformal_window.0, d.conformal_window.1.min(t_final));
        let r = conformal_identity_residual(run, t1, t2);
        let pass = r.maxwell < CONFORMAL_TOLERANCE && r.wave < CONFORMAL_TOLERANCE;
        out.push(line(
            "conformal_identity",
            pass,
            format!("maxwell {:e} wave {:e} on [{}; {}] < {CONFORMAL_TOLERANCE:e}", r.maxwell, r.wave, r.t1, r.t2),
        ));
    }

    if d.morawetz.is_some() {
        let r = morawetz_identity_residual(run);
        let pass = r.residual < MORAWETZ_TOLERANCE && r.leading_min_density >= 0.0;
        out.push(line(
            "morawetz_identity",
            pass,
            format!("residual {:e} < {MORAWETZ_TOLERANCE:e} leading min density {:e}", r.residual, r.leading_min_density),
        ));
    }

    if d.local_decay {
        let ratio = local_decay_ratio(run);
        let monotone = ratio.windows(2).all(|w| w[1].1 >= w[0].1);
        let last = ratio.last().map(|x| x.1).unwrap_or(0.0);
        out.push(line(
            "local_decay",
            monotone && last <= LOCAL_DECAY_BOUND,
            format!("ratio {last:e} <= {LOCAL_DECAY_BOUND} monotone {monotone}"),
        ));
    }

    let mut worst: f64 = 0.0;
    let mut spectral_ok = true;
    for m in &run.modes {
        let (l, mm) = (m.config.index.l, m.config.index.m);
        let c = ladder_coefficients(l);
        let ll = f64::from(l) * f64::from(l + 1);
        spectral_ok &= (c.c_up * c.c_down - ll).abs() <= 1e-12 * ll.max(1.0) && consistency_check(l).is_ok();
        if let Some(r) = angular_oracle_residual(l, mm) {
            worst = worst.max(r);
        }
    }
    out.push(line(
        "spectral_consistency",
        spectral_ok && worst < ANGULAR_TOLERANCE,
        format!("ladder products exact {spectral_ok} angular residual {worst:e}"),
    ));

    let mut static_dt: f64 = 0.0;
    for m in run.modes.iter().filter(|m| m.config.index.l == 0) {
        let d = PriceSolver::new(&run.grid, 0).time_derivative(&m.final_price);
        for f in [&d.b, &d.a, &d.c] {
            static_dt = f.re.iter().chain(&f.im).fold(static_dt, |a, x| a.max(x.abs()));
        }
    }
    if run.modes.iter().any(|m| m.config.index.l == 0) {
        out.push(line(
            "static_time_derivative",
            static_dt < STATIC_DERIVATIVE_TOLERANCE,
            format!("max |d_t| {static_dt:e} < {STATIC_DERIVATIVE_TOLERANCE:e}"),
        ));
    }

    let finite = run.modes.iter().all(|m| m.rows.iter().all(|r| r.constraint.is_finite()));
    out.push(line("constraint_finite", finite, "constraint residual finite at every sample".into()));

    if d.hardy_suite {
        let h = hardy_suite(d.hardy_samples, d.hardy_seed);
        out.push(line(
            "hardy_suite",
            h.passed == h.total,
            format!("{}/{} pass worst lhs/rhs {:.4}", h.passed, h.total, h.worst_ratio),
        ));
    }
    out
}
