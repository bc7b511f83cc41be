use super::{fit_power_law, Component, RayKind, RaySeries};
use crate::background::{Background, Radius};
use crate::energetics::EnergyReport;
use crate::fields::ModalSample;
use crate::solver::run::{ModeSeries, RunSeries};
use crate::solver::InitialKind;
use crate::spectral::HarmonicIndex;
use std::collections::BTreeMap;
use std::fmt;

/// Default observation angle, away from the poles so every `m` contributes.
pub const DEFAULT_THETA: f64 = 1.0;
pub const DEFAULT_PHI: f64 = 0.3;

fn radius_at(run: &RunSeries, rs: f64) -> Option<Radius> {
    run.grid.background().radius(rs).ok()
}

/// Probe samples of one mode, `samples[row][probe]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProbes {
    pub index: HarmonicIndex,
    /// Center of Gaussian initial data, used to skip the direct-pulse transient.
    pub pulse_center: Option<f64>,
    pub samples: Vec<Vec<ModalSample>>,
}

/// What the decay table needs from a run; can be rebuilt from the CSV outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub background: Background,
    pub times: Vec<f64>,
    pub probes: Vec<f64>,
    pub modes: Vec<ModeProbes>,
    /// Surface energy summed over radiative modes, per stored time.
    pub surface: Vec<f64>,
    pub surface_band: (f64, f64),
}

impl ProbeRecord {
    pub fn from_run(run: &RunSeries) -> Self {
        let modes = run
            .modes
            .iter()
            .map(|m| ModeProbes {
                index: m.config.index,
                pulse_center: match &m.config.init.kind {
                    InitialKind::Gaussian { center, amplitude, .. } if *amplitude != 0.0 => Some(*center),
                    _ => None,
                },
                samples: m.probes.clone(),
            })
            .collect();
        let surface = (0..run.times.len()).map(|k| radiative(run).map(|m| m.rows[k].surface).sum()).collect();
        ProbeRecord {
            background: *run.grid.background(),
            times: run.times.clone(),
            probes: run.probes.clone(),
            modes,
            surface,
            surface_band: run.surface,
        }
    }

    /// Magnitude of `component` at probe `probe` per stored time, over the modes passing `select`.
    pub fn probe_series(
        &self,
        probe: usize,
        component: Component,
        theta: f64,
        phi: f64,
        select: impl Fn(&ModeProbes) -> bool,
    ) -> Vec<(f64, f64)> {
        let Some(&rs) = self.probes.get(probe) else { return Vec::new() };
        let Ok(radius) = self.background.radius(rs) else { return Vec::new() };
        let modes: Vec<&ModeProbes> = self.modes.iter().filter(|m| select(m)).collect();
        self.times
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let samples: Vec<ModalSample> = modes.iter().map(|m| m.samples[k][probe]).collect();
                (t, component.value(&samples, theta, phi, radius))
            })
            .collect()
    }
}

fn radiative(run: &RunSeries) -> impl Iterator<Item = &ModeSeries> {
    run.modes.iter().filter(|m| m.config.index.l > 0)
}

/// Magnitude of the ray's component along ray `ray`, summing all modes.
pub fn sample_along_ray(run: &RunSeries, ray: usize, theta: f64, phi: f64) -> RaySeries {
    let Some(spec) = run.rays.get(ray) else { return RaySeries::default() };
    let Some(first) = run.modes.first() else {
        return RaySeries::default();
    };
    let (base, truncated) = &first.rays[ray];
    let points = base
        .iter()
        .enumerate()
        .filter_map(|(k, s)| {
            let radius = radius_at(run, s.rs)?;
            let samples: Vec<ModalSample> = run.modes.iter().map(|m| m.rays[ray].0[k].sample).collect();
            Some((s.param, spec.component.value(&samples, theta, phi, radius)))
        })
        .collect();
    RaySeries { points, truncated: *truncated && spec.kind != RayKind::FixedTSlice }
}

fn row_index(run: &RunSeries, t: f64) -> usize {
    run.times
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

fn relative(lhs: f64, rhs: f64, scale: f64) -> f64 {
    let denom = lhs.abs().max(scale);
    if denom == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / denom
    }
}

/// Residuals of the conformal almost-conservation law on the stored times nearest `[t1, t2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalResidual {
    pub t1: f64,
    pub t2: f64,
    /// `Delta E^K` against the time integral of the trapping term.
    pub maxwell: f64,
    /// `Delta E_C` of the scalar wave against its bulk term.
    pub wave: f64,
    pub maxwell_lhs: f64,
    pub maxwell_rhs: f64,
}

pub fn conformal_identity_residual(run: &RunSeries, t1: f64, t2: f64) -> ConformalResidual {
    let (i, j) = (row_index(run, t1), row_index(run, t2));
    let mut ml = 0.0;
    let mut mr = 0.0;
    let mut wl = 0.0;
    let mut wr = 0.0;
    let mut et0 = 0.0;
    let mut ew0 = 0.0;
    for m in &run.modes {
        let (a, b) = (&m.rows[i], &m.rows[j]);
        ml += b.e_k - a.e_k;
        mr += b.trap_cum - a.trap_cum;
        if m.config.index.l > 0 {
            wl += b.e_conf_wave - a.e_conf_wave;
            wr += b.conf_rate_cum - a.conf_rate_cum;
            ew0 += m.rows[0].e_wave;
            et0 += m.rows[0].e_t;
        }
    }
    ConformalResidual {
        t1: run.times.get(i).copied().unwrap_or(0.0),
        t2: run.times.get(j).copied().unwrap_or(0.0),
        maxwell: relative(ml, mr, et0),
        wave: relative(wl, wr, ew0),
        maxwell_lhs: ml,
        maxwell_rhs: mr,
    }
}

/// Multiplier identity over `[t_start, t_final]`, summed over modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorawetzResidual {
    pub residual: f64,
    /// `-2 (E_gamma(t_final) - E_gamma(t_start))`.
    pub lhs: f64,
    pub rhs: f64,
    /// Time integral of the leading bulk group.
    pub leading_integral: f64,
    /// Smallest pointwise leading-group density over every step.
    pub leading_min_density: f64,
    pub started: bool,
}

pub fn morawetz_identity_residual(run: &RunSeries) -> MorawetzResidual {
    let mut out = MorawetzResidual {
        residual: 0.0,
        lhs: 0.0,
        rhs: 0.0,
        leading_integral: 0.0,
        leading_min_density: 0.0,
        started: false,
    };
    let mut scale = 0.0;
    for m in radiative(run) {
        let Some(last) = m.rows.last() else { continue };
        let mw = last.morawetz;
        if !mw.started {
            continue;
        }
        out.started = true;
        out.lhs += -2.0 * (mw.e_gamma - m.e_gamma_start);
        out.rhs += mw.groups.iter().sum::<f64>();
        out.leading_integral += mw.groups[0];
        out.leading_min_density = out.leading_min_density.min(mw.leading_min_density);
        scale += m.rows[0].e_wave;
    }
    out.residual = relative(out.lhs, out.rhs, scale);
    out
}

/// `int_0^t int |a|^2 / (1 + rs^2)^2` over `E(0)`, per stored time.
pub fn local_decay_ratio(run: &RunSeries) -> Vec<(f64, f64)> {
    let e0: f64 = radiative(run).map(|m| m.rows[0].e_wave).sum();
    run.times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let acc: f64 = radiative(run).map(|m| m.rows[k].local_cum).sum();
            (t, if e0 > 0.0 { acc / e0 } else { 0.0 })
        })
        .collect()
}

/// Relative drift `max_t |E(t) - E(0)| / E(0)` of the summed wave energy.
pub fn energy_drift(run: &RunSeries) -> f64 {
    let total = |k: usize| radiative(run).map(|m| m.rows[k].e_wave).sum::<f64>();
    let e0 = total(0);
    if e0 == 0.0 {
        return 0.0;
    }
    (0..run.times.len()).map(|k| (total(k) - e0).abs()).fold(0.0, f64::max) / e0
}

/// Energy rows in the order of the stored times.
pub fn energy_reports(run: &RunSeries) -> Vec<EnergyReport> {
    run.times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let res = conformal_identity_residual(run, 0.0, t);
            let mut identity_residuals = BTreeMap::new();
            identity_residuals.insert("conformal_maxwell".to_string(), res.maxwell);
            identity_residuals.insert("conformal_wave".to_string(), res.wave);
            EnergyReport {
                t,
                e_wave: run.modes.iter().map(|m| m.rows[k].e_wave).collect(),
                e_conf_wave: run.modes.iter().map(|m| m.rows[k].e_conf_wave).collect(),
                e_t_maxwell: run.modes.iter().map(|m| m.rows[k].e_t).sum(),
                e_k_maxwell: run.modes.iter().map(|m| m.rows[k].e_k).sum(),
                trapping_integral_increment: run.modes.iter().map(|m| m.rows[k].trap_cum).sum(),
                identity_residuals,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Pass,
    Fail,
    NotEvaluated(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Pass => f.write_str("pass"),
            RowStatus::Fail => f.write_str("fail"),
            RowStatus::NotEvaluated(_) => f.write_str("not-evaluated"),
        }
    }
}

/// One line of the decay table. A fitted exponent passes when `exponent <= bound + tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub id: String,
    pub description: String,
    /// `-inf` for an identically zero series.
    pub exponent: Option<f64>,
    pub tolerance: f64,
    pub bound: f64,
    pub status: RowStatus,
}

impl DecayRow {
    pub fn passed(&self) -> bool {
        self.status == RowStatus::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayConfig {
    pub theta: f64,
    pub phi: f64,
    /// Earliest start of any fit window.
    pub min_start: f64,
    /// Time window of the outgoing `phi_1` boundedness row.
    pub outgoing_window: (f64, f64),
    /// Range of `rs` for the near-horizon row.
    pub horizon_band: (f64, f64),
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            theta: DEFAULT_THETA,
            phi: DEFAULT_PHI,
            min_start: 50.0,
            outgoing_window: (50.0, 400.0),
            horizon_band: (-150.0, -10.0),
        }
    }
}

struct Fitter<'a> {
    run: &'a ProbeRecord,
    cfg: DecayConfig,
    centers: Vec<f64>,
    t_final: f64,
}

enum Outcome {
    Zero,
    Fit(f64),
    Missing(String),
}

impl Fitter<'_> {
    fn start(&self, rs: f64) -> f64 {
        self.centers.iter().map(|c| 2.0 * (rs - c).abs()).fold(self.cfg.min_start, f64::max)
    }

    /// Fits `value(t, rs, r, |component|)` against `param(t, rs)` over `t in window`.
    fn fit(
        &self,
        probes: &[usize],
        component: Component,
        window: impl Fn(f64) -> (f64, f64),
        param: impl Fn(f64, f64) -> f64,
        weight: impl Fn(f64, f64, f64) -> f64,
    ) -> Outcome {
        if probes.is_empty() {
            return Outcome::Missing("no probe in range".into());
        }
        let mut worst: Option<f64> = None;
        let mut zero = true;
        let mut missing = None;
        for &p in probes {
            let rs = self.run.probes[p];
            let Ok(radius) = self.run.background.radius(rs) else { continue };
            let raw = self.run.probe_series(p, component, self.cfg.theta, self.cfg.phi, |m| m.index.l > 0);
            if raw.iter().all(|&(_, v)| v == 0.0) {
                continue;
            }
            zero = false;
            let (ta, tb) = window(rs);
            if !(tb > ta) {
                missing = Some(format!("empty window at rs {rs}"));
                continue;
            }
            let series: Vec<(f64, f64)> = raw
                .iter()
                .filter(|(t, _)| *t >= ta && *t <= tb)
                .map(|&(t, v)| (param(t, rs), v * weight(t, rs, radius.areal)))
                .collect();
            let pw = (param(ta, rs), param(tb, rs));
            match fit_power_law(&series, pw) {
                Ok(f) => worst = Some(worst.map_or(f.exponent, |w: f64| w.max(f.exponent))),
                Err(e) => missing = Some(format!("rs {rs}: {e}")),
            }
        }
        match (worst, zero) {
            (_, true) => Outcome::Zero,
            (Some(p), _) if missing.is_none() => Outcome::Fit(p),
            (_, _) => Outcome::Missing(missing.unwrap_or_else(|| "no usable probe".into())),
        }
    }

    fn probes_where(&self, pred: impl Fn(f64) -> bool) -> Vec<usize> {
        (0..self.run.probes.len()).filter(|&i| pred(self.run.probes[i])).collect()
    }
}

fn make_row(id: &str, description: &str, bound: f64, tolerance: f64, outcome: Outcome) -> DecayRow {
    let (exponent, status) = match outcome {
        Outcome::Zero => (Some(f64::NEG_INFINITY), RowStatus::Pass),
        Outcome::Fit(p) => (Some(p), if p <= bound + tolerance { RowStatus::Pass } else { RowStatus::Fail }),
        Outcome::Missing(why) => (None, RowStatus::NotEvaluated(why)),
    };
    DecayRow { id: id.into(), description: description.into(), exponent, tolerance, bound, status }
}

/// Fitted decay exponents against the one-sided bounds, one row per check.
///
/// Radiative rows use modes with `l >= 1`; an identically zero series passes with
/// exponent `-inf`. The `l0_static` row appears only when an `l = 0` mode is present.
pub fn decay_report(run: &ProbeRecord, cfg: &DecayConfig) -> Vec<DecayRow> {
    let t_final = run.times.last().copied().unwrap_or(0.0);
    let centers = run.modes.iter().filter(|m| m.index.l > 0).filter_map(|m| m.pulse_center).collect();
    let fit = Fitter { run, cfg: *cfg, centers, t_final };
    let origin = fit.probes_where(|rs| rs.abs() < 1e-9);
    let outside = fit.probes_where(|rs| rs > 1.0);
    let (h0, h1) = cfg.horizon_band;
    let horizon = fit.probes_where(|rs| rs >= h0 && rs <= h1);
    let stationary = |rs: f64| (fit.start(rs), fit.t_final);
    let mut rows = Vec::new();

    for (id, comp, name) in [
        ("a_phi1", Component::Phi1, "phi1"),
        ("a_phi0", Component::Phi0, "phi0"),
        ("a_phim1", Component::PhiM1, "phim1"),
    ] {
        let out = fit.fit(&origin, comp, stationary, |t, _| t, |_, _, _| 1.0);
        rows.push(make_row(id, &format!("|{name}| at rs=0 vs t"), -1.0, 0.0, out));
    }

    let surface = {
        let t0 = fit.start(0.0);
        let series: Vec<(f64, f64)> = run.times.iter().copied().zip(run.surface.iter().copied()).collect();
        if series.iter().all(|p| p.1 == 0.0) {
            Outcome::Zero
        } else {
            match fit_power_law(&series, (t0, t_final)) {
                Ok(f) => Outcome::Fit(f.exponent),
                Err(e) => Outcome::Missing(e.to_string()),
            }
        }
    };
    let (r1, r2) = run.surface_band;
    rows.push(make_row("b_surface", &format!("surface energy on r in [{r1}; {r2}] vs t"), -2.0, 0.3, surface));

    let out = fit.fit(
        &outside,
        Component::PhiM1,
        |rs| (fit.start(rs).max(rs + 1.0), fit.t_final),
        |t, rs| t - rs,
        |_, _, r| r,
    );
    rows.push(make_row("c_phim1_cone", "r |phim1| vs u- at rs > 1 inside the cone", -1.0, 0.0, out));

    let (wa, wb) = cfg.outgoing_window;
    let out = fit.fit(&outside, Component::Phi1, |_| (wa, wb.min(fit.t_final)), |t, _| t, |t, rs, r| {
        r.powf(1.5) * (t + rs)
    });
    rows.push(make_row("d_phi1_outgoing", "r^1.5 u+ |phi1| bounded at rs > 1 vs t", 0.0, 0.1, out));

    let out = fit.fit(
        &horizon,
        Component::HorizonM1,
        |rs| (fit.start(rs).max(1.0 - rs), fit.t_final),
        |t, rs| t + rs,
        |_, _, _| 1.0,
    );
    rows.push(make_row("e_horizon", &format!("|PhiM1 / (1-2M/r)| vs u+ for rs in [{h0}; {h1}]"), -1.0, 0.0, out));

    let out = fit.fit(&outside, Component::Phi0, stationary, |t, _| t, |t, rs, r| {
        let up = t + rs;
        let um = (t - rs).abs();
        let env = ((up - um) / (up * (1.0 + um))).sqrt();
        r * r / env
    });
    rows.push(make_row("f_phi0_mixed", "r^2 |phi0| over the mixed envelope bounded at rs > 1", 0.0, 0.1, out));

    if run.modes.iter().any(|m| m.index.l == 0) {
        let out = match origin.first() {
            None => Outcome::Missing("no probe at rs=0".into()),
            Some(&p) => {
                let series = run.probe_series(p, Component::Phi0, cfg.theta, cfg.phi, |m| m.index.l == 0);
                let t0 = run.times.get(1).copied().unwrap_or(0.0);
                match fit_power_law(&series, (t0, t_final)) {
                    Ok(f) => Outcome::Fit(f.exponent),
                    Err(e) => Outcome::Missing(e.to_string()),
                }
            }
        };
        let mut row = make_row("l0_static", "l=0 |phi0| at rs=0 vs t non-radiatable", 0.0, 1e-3, out);
        if let Some(p) = row.exponent {
            row.status = if p.abs() <= 1e-3 { RowStatus::Pass } else { RowStatus::Fail };
        }
        rows.push(row);
    }
    rows
}
