//! Drives all configured modes to the final time and records diagnostics.

use super::{constraint_residual, init_price_from_wave, init_wave, InitialDataSpec, PriceSolver, PriceState, WaveSolver};
use crate::analysis::{RayKind, RaySpec};
use crate::background::RadialGrid;
use crate::energetics::{
    boundary_outflow_rate, conformal_wave_rate, local_decay_rate, mode_k_energy, mode_t_energy, surface_energy,
    trapping_rate, wave_conformal_energy, wave_energy, Multiplier, MultiplierConfig, MORAWETZ_GROUPS,
};
use crate::error::{Error, Result, SolverError};
use crate::fields::ModalSample;
use crate::spectral::HarmonicIndex;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeConfig {
    pub index: HarmonicIndex,
    pub init: InitialDataSpec,
}

/// Everything the evolution needs, independent of file formats.
#[derive(Debug, Clone)]
pub struct EvolveSpec {
    pub grid: RadialGrid,
    pub modes: Vec<ModeConfig>,
    pub cfl: f64,
    pub t_final: f64,
    pub cadence: f64,
    pub probes: Vec<f64>,
    pub rays: Vec<RaySpec>,
    /// Areal-radius band for the surface energy.
    pub surface: (f64, f64),
    pub multiplier: Option<MultiplierConfig>,
    /// Keep the full Price state at every output time.
    pub keep_snapshots: bool,
    pub threads: Option<usize>,
}

impl EvolveSpec {
    /// Time step and steps per output row: `dt = cadence / m` with `dt <= cfl h`.
    pub fn time_step(&self) -> (f64, u64) {
        let m = (self.cadence / (self.cfl * self.grid.h()) - 1e-9).ceil().max(1.0);
        (self.cadence / m, m as u64)
    }
}

/// Multiplier identity bookkeeping for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MorawetzRow {
    pub started: bool,
    pub e_gamma: f64,
    /// `int_{t_start}^{t}` of each bulk group.
    pub groups: [f64; MORAWETZ_GROUPS],
    /// Smallest leading-group density seen so far.
    pub leading_min_density: f64,
}

/// Diagnostics of one mode at one output time. Fields ending in `_cum` are time
/// integrals from `t = 0` by the trapezoid rule over every step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeRow {
    pub t: f64,
    pub e_wave: f64,
    pub e_conf_wave: f64,
    pub conf_growth: bool,
    pub e_t: f64,
    pub e_k: f64,
    pub trap_cum: f64,
    pub conf_rate_cum: f64,
    pub outflow_cum: f64,
    pub local_cum: f64,
    pub surface: f64,
    pub constraint: f64,
    pub morawetz: MorawetzRow,
}

/// One sample along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySample {
    pub row: usize,
    pub param: f64,
    pub rs: f64,
    pub sample: ModalSample,
}

#[derive(Debug, Clone)]
pub struct ModeSeries {
    pub config: ModeConfig,
    pub rows: Vec<ModeRow>,
    /// `probes[row][k]` for probe `k`.
    pub probes: Vec<Vec<ModalSample>>,
    /// `rays[j]` samples of ray `j`, with a flag for leaving the grid after entering.
    pub rays: Vec<(Vec<RaySample>, bool)>,
    pub e_gamma_start: f64,
    pub snapshots: Vec<PriceState>,
    pub final_price: PriceState,
    pub final_wave: super::HarmonicWaveState,
    pub steps: u64,
}

/// Output of [`evolve_run`].
#[derive(Debug, Clone)]
pub struct RunSeries {
    pub grid: RadialGrid,
    pub dt: f64,
    pub times: Vec<f64>,
    pub modes: Vec<ModeSeries>,
    pub probes: Vec<f64>,
    pub rays: Vec<RaySpec>,
    pub multiplier: Option<MultiplierConfig>,
    pub surface: (f64, f64),
}

struct Accumulator {
    rates: [f64; 4],
    cum: [f64; 4],
    mor_started: bool,
    mor_rates: [f64; MORAWETZ_GROUPS],
    mor_cum: [f64; MORAWETZ_GROUPS],
    mor_min: f64,
    e_gamma: f64,
    e_gamma_start: f64,
}

fn rates(wave: &super::HarmonicWaveState, price: &PriceState, grid: &RadialGrid) -> [f64; 4] {
    [
        trapping_rate(price, grid),
        conformal_wave_rate(wave, grid),
        boundary_outflow_rate(wave, grid),
        local_decay_rate(wave, grid),
    ]
}

fn evolve_mode(spec: &EvolveSpec, mode: &ModeConfig) -> Result<ModeSeries> {
    let grid = &spec.grid;
    let mut wave = init_wave(&mode.init, grid, mode.index)?;
    let mut price = init_price_from_wave(&wave, grid)?;
    let mut wave_solver = WaveSolver::new(grid, mode.index.l);
    let mut price_solver = PriceSolver::new(grid, mode.index.l);
    let multiplier = match spec.multiplier {
        Some(c) => Some(Multiplier::new(grid, c).map_err(|e| Error::Validation(e.to_string()))?),
        None => None,
    };
    let (dt, per_row) = spec.time_step();
    let total = if spec.t_final > 0.0 { (spec.t_final / dt - 1e-9).ceil() as u64 } else { 0 };

    let mut acc = Accumulator {
        rates: rates(&wave, &price, grid),
        cum: [0.0; 4],
        mor_started: false,
        mor_rates: [0.0; MORAWETZ_GROUPS],
        mor_cum: [0.0; MORAWETZ_GROUPS],
        mor_min: 0.0,
        e_gamma: 0.0,
        e_gamma_start: 0.0,
    };
    let mut out = ModeSeries {
        config: mode.clone(),
        rows: Vec::new(),
        probes: Vec::new(),
        rays: vec![(Vec::new(), false); spec.rays.len()],
        e_gamma_start: 0.0,
        snapshots: Vec::new(),
        final_price: price.clone(),
        final_wave: wave.clone(),
        steps: 0,
    };
    record(spec, &wave, &price, &acc, &mut out)?;
    for step in 1..=total {
        wave_solver.step(&mut wave, dt).map_err(|e| context(e, mode))?;
        price_solver.step(&mut price, dt).map_err(|e| context(e, mode))?;
        // Keep time exact rather than accumulated.
        wave.t = step as f64 * dt;
        price.t = wave.t;
        let next = rates(&wave, &price, grid);
        for k in 0..4 {
            acc.cum[k] += 0.5 * dt * (acc.rates[k] + next[k]);
        }
        acc.rates = next;
        if let Some(m) = &multiplier {
            if wave.t >= m.config().start_time - 1e-12 {
                let s = m.sample(&wave, grid);
                if acc.mor_started {
                    for k in 0..MORAWETZ_GROUPS {
                        acc.mor_cum[k] += 0.5 * dt * (acc.mor_rates[k] + s.groups[k]);
                    }
                } else {
                    acc.mor_started = true;
                    acc.e_gamma_start = s.e_gamma;
                }
                acc.mor_rates = s.groups;
                acc.mor_min = acc.mor_min.min(s.leading_min_density);
                acc.e_gamma = s.e_gamma;
            }
        }
        if step % per_row == 0 || step == total {
            record(spec, &wave, &price, &acc, &mut out)?;
        }
    }
    out.e_gamma_start = acc.e_gamma_start;
    out.steps = total;
    out.final_price = price;
    out.final_wave = wave;
    Ok(out)
}

fn context(e: SolverError, mode: &ModeConfig) -> Error {
    match e {
        SolverError::NonFinite { step, .. } => Error::Solver(SolverError::NonFinite {
            l: mode.index.l,
            m: mode.index.m,
            step,
        }),
        other => Error::Solver(other),
    }
}

fn record(
    spec: &EvolveSpec,
    wave: &super::HarmonicWaveState,
    price: &PriceState,
    acc: &Accumulator,
    out: &mut ModeSeries,
) -> Result<()> {
    let grid = &spec.grid;
    let conf = wave_conformal_energy(wave, grid);
    let row = out.rows.len();
    out.rows.push(ModeRow {
        t: wave.t,
        e_wave: wave_energy(wave, grid),
        e_conf_wave: conf.value,
        conf_growth: conf.boundary_growth,
        e_t: mode_t_energy(price, grid),
        e_k: mode_k_energy(price, grid).value,
        trap_cum: acc.cum[0],
        conf_rate_cum: acc.cum[1],
        outflow_cum: acc.cum[2],
        local_cum: acc.cum[3],
        surface: surface_energy(price, grid, spec.surface.0, spec.surface.1),
        constraint: constraint_residual(price, grid),
        morawetz: MorawetzRow {
            started: acc.mor_started,
            e_gamma: acc.e_gamma,
            groups: acc.mor_cum,
            leading_min_density: acc.mor_min,
        },
    });
    let probes = spec
        .probes
        .iter()
        .map(|&rs| price.sample(grid, rs).ok_or(Error::Validation(format!("probe rs = {rs} is outside the grid"))))
        .collect::<Result<Vec<_>>>()?;
    out.probes.push(probes);
    for (j, ray) in spec.rays.iter().enumerate() {
        let (samples, truncated) = &mut out.rays[j];
        match ray.kind {
            RayKind::FixedTSlice => {
                let first = samples.is_empty();
                if first && wave.t >= ray.value - 1e-9 {
                    for (i, &rs) in grid.rs().iter().enumerate() {
                        samples.push(RaySample {
                            row,
                            param: rs,
                            rs,
                            sample: ModalSample { index: price.mode, b: price.b.get(i), a: price.a.get(i), c: price.c.get(i) },
                        });
                    }
                }
            }
            _ => {
                if let Some((param, rs)) = ray.point(wave.t) {
                    match price.sample(grid, rs) {
                        Some(sample) => samples.push(RaySample { row, param, rs, sample }),
                        None => {
                            if !samples.is_empty() {
                                *truncated = true;
                            }
                        }
                    }
                }
            }
        }
    }
    if spec.keep_snapshots {
        out.snapshots.push(price.clone());
    }
    Ok(())
}

/// Evolves every configured mode, fanning modes out over a worker pool.
pub fn evolve_run(spec: &EvolveSpec) -> Result<RunSeries> {
    if !(spec.cfl > 0.0) {
        return Err(Error::Validation(format!("cfl must be positive, got {}", spec.cfl)));
    }
    if !(spec.cadence > 0.0) || !(spec.t_final >= 0.0) {
        return Err(Error::Validation("cadence must be positive and t_final nonnegative".into()));
    }
    let threads = spec.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Validation(format!("worker pool: {e}")))?;
    let modes: Vec<ModeSeries> =
        pool.install(|| spec.modes.par_iter().map(|m| evolve_mode(spec, m)).collect::<Result<Vec<_>>>())?;
    let (dt, _) = spec.time_step();
    let times = match modes.first() {
        Some(m) => m.rows.iter().map(|r| r.t).collect(),
        None => {
            let (_, per_row) = spec.time_step();
            let total = if spec.t_final > 0.0 { (spec.t_final / dt - 1e-9).ceil() as u64 } else { 0 };
            let mut t: Vec<f64> = (0..=total).filter(|s| s % per_row == 0 || *s == total).map(|s| s as f64 * dt).collect();
            t.dedup();
            t
        }
    };
    Ok(RunSeries {
        grid: spec.grid.clone(),
        dt,
        times,
        modes,
        probes: spec.probes.clone(),
        rays: spec.rays.clone(),
        multiplier: spec.multiplier,
        surface: spec.surface,
    })
}
