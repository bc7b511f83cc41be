use super::stencil::d1_fourth_order;
use super::{ComplexField, HarmonicWaveState, PriceState};
use crate::background::RadialGrid;
use crate::error::SolverError;
use crate::fields::StaticCharge;
use crate::spectral::{ladder_coefficients, HarmonicIndex};
use num_complex::Complex64;

/// Relative boundary amplitude above which Gaussian data is rejected.
const SUPPORT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeSymmetry {
    /// `a_t = 0`.
    TimeSymmetric,
    /// Moving toward the horizon: `a_t = a_rs`.
    Ingoing,
    /// Moving toward infinity: `a_t = -a_rs`.
    Outgoing,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialKind {
    Gaussian {
        center: f64,
        width: f64,
        amplitude: f64,
        symmetry: TimeSymmetry,
    },
    StaticCharge(StaticCharge),
    /// Rows `(rs, Re a, Im a, Re a_t, Im a_t)`, interpolated linearly; zero outside the table.
    Table(Vec<[f64; 5]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialDataSpec {
    pub kind: InitialKind,
}

impl InitialDataSpec {
    pub fn gaussian(center: f64, width: f64, amplitude: f64, symmetry: TimeSymmetry) -> Self {
        InitialDataSpec {
            kind: InitialKind::Gaussian { center, width, amplitude, symmetry },
        }
    }

    pub fn static_charge(q_e: f64, q_b: f64) -> Self {
        InitialDataSpec {
            kind: InitialKind::StaticCharge(StaticCharge { q_e, q_b }),
        }
    }
}

fn table_value(rows: &[[f64; 5]], rs: f64) -> [f64; 4] {
    let k = rows.partition_point(|row| row[0] <= rs);
    if k == 0 || k == rows.len() {
        if let Some(last) = rows.last() {
            if rs == last[0] {
                return [last[1], last[2], last[3], last[4]];
            }
        }
        return [0.0; 4];
    }
    let (p, q) = (&rows[k - 1], &rows[k]);
    let s = (rs - p[0]) / (q[0] - p[0]);
    [1, 2, 3, 4].map(|j| p[j] + s * (q[j] - p[j]))
}

/// Samples initial data for the scalar wave formulation.
pub fn init_wave(spec: &InitialDataSpec, grid: &RadialGrid, mode: HarmonicIndex) -> Result<HarmonicWaveState, SolverError> {
    let n = grid.len();
    let rs = grid.rs();
    match &spec.kind {
        InitialKind::Gaussian { center, width, amplitude, symmetry } => {
            if !(*width > 0.0) || !width.is_finite() || !center.is_finite() || !amplitude.is_finite() {
                return Err(SolverError::InitialData(format!("gaussian needs finite parameters and width > 0, got width {width}")));
            }
            if mode.l == 0 && *amplitude != 0.0 {
                return Err(SolverError::InitialData("the l = 0 mode carries no radiation; use static_charge".into()));
            }
            let g = |x: f64| amplitude * (-((x - center) / width).powi(2)).exp();
            let edge = g(grid.rs_min()).abs().max(g(grid.rs_max()).abs());
            if edge > SUPPORT_TOLERANCE * amplitude.abs() {
                return Err(SolverError::InitialData(format!(
                    "gaussian at {center} with width {width} is not negligible at the grid boundary"
                )));
            }
            let a = ComplexField::from_fn(n, |i| Complex64::new(g(rs[i]), 0.0));
            let slope = |i: usize| -2.0 * (rs[i] - center) / (width * width) * a.re[i];
            let adot = match symmetry {
                TimeSymmetry::TimeSymmetric => ComplexField::zeros(n),
                TimeSymmetry::Ingoing => ComplexField::from_fn(n, |i| Complex64::new(slope(i), 0.0)),
                TimeSymmetry::Outgoing => ComplexField::from_fn(n, |i| Complex64::new(-slope(i), 0.0)),
            };
            Ok(HarmonicWaveState { mode, t: 0.0, a, adot })
        }
        InitialKind::StaticCharge(charge) => {
            if mode.l != 0 {
                return Err(SolverError::InitialData(format!("static charge lives in l = 0, not l = {}", mode.l)));
            }
            let q = charge.monopole_amplitude();
            Ok(HarmonicWaveState {
                mode,
                t: 0.0,
                a: ComplexField::from_fn(n, |_| q),
                adot: ComplexField::zeros(n),
            })
        }
        InitialKind::Table(rows) => {
            if rows.windows(2).any(|w| !(w[1][0] > w[0][0])) {
                return Err(SolverError::InitialData("table rs column must be strictly increasing".into()));
            }
            let vals: Vec<[f64; 4]> = rs.iter().map(|&x| table_value(rows, x)).collect();
            Ok(HarmonicWaveState {
                mode,
                t: 0.0,
                a: ComplexField::from_fn(n, |i| Complex64::new(vals[i][0], vals[i][1])),
                adot: ComplexField::from_fn(n, |i| Complex64::new(vals[i][2], vals[i][3])),
            })
        }
    }
}

/// Builds `(b, a, c)` from wave data: `b = (a_t + a_rs)/c_down`, `c = -(a_t - a_rs)/c_down`.
pub fn init_price_from_wave(wave: &HarmonicWaveState, grid: &RadialGrid) -> Result<PriceState, SolverError> {
    let n = grid.len();
    if wave.a.len() != n {
        return Err(SolverError::LengthMismatch { expected: n, got: wave.a.len() });
    }
    let mut out = PriceState::zeros(wave.mode, n);
    out.t = wave.t;
    out.a = wave.a.clone();
    if wave.mode.l == 0 {
        let scale = wave.a.norm_sqr_iter().fold(0.0, f64::max).sqrt().max(f64::MIN_POSITIVE);
        let a0 = wave.a.get(0);
        let varies = (0..n).any(|i| (wave.a.get(i) - a0).norm() > 1e-12 * scale);
        let moving = wave.adot.norm_sqr_iter().any(|x| x > 0.0);
        if varies || moving {
            return Err(SolverError::InitialData("l = 0 data must be a static charge (constant amplitude)".into()));
        }
        return Ok(out);
    }
    let lam = ladder_coefficients(wave.mode.l).c_down;
    let mut d = vec![0.0; n];
    for (a, adot, b, c) in [
        (&wave.a.re, &wave.adot.re, &mut out.b.re, &mut out.c.re),
        (&wave.a.im, &wave.adot.im, &mut out.b.im, &mut out.c.im),
    ] {
        d1_fourth_order(a, grid.h(), &mut d);
        for i in 0..n {
            b[i] = (adot[i] + d[i]) / lam;
            c[i] = -(adot[i] - d[i]) / lam;
        }
    }
    Ok(out)
}
