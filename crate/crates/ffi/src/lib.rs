//! C ABI over the solver.
//!
//! Objects are opaque handles created by `maxlab_*_new` and released by the matching
//! `maxlab_*_free`. Every fallible call returns a [`MaxlabStatus`]; on failure the message
//! is available from [`maxlab_last_error`] on the same thread.

use maxlab::analysis::fit_power_law;
use maxlab::background::{Background, RadialGrid};
use maxlab::error::{AnalysisError, BackgroundError, Error};
use maxlab::harness::cli::{Command, CommonArgs, Scale};
use maxlab::harness::run_command;
use maxlab::solver::{
    constraint_residual, init_price_from_wave, init_wave, HarmonicWaveState, InitialDataSpec, PriceSolver, PriceState,
    TimeSymmetry, WaveSolver,
};
use maxlab::energetics::{mode_t_energy, wave_energy};
use maxlab::spectral::HarmonicIndex;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxlabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Invalid parameters or configuration.
    InvalidArgument = 2,
    /// The evolution produced non-finite values or another numerical failure.
    Numeric = 3,
    Io = 4,
    /// Too few envelope points for a power-law fit.
    InsufficientData = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Initial-data symmetry for [`maxlab_wave_new`] and [`maxlab_price_new`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxlabSymmetry {
    TimeSymmetric = 0,
    Ingoing = 1,
    Outgoing = 2,
}

/// Schwarzschild background of a given mass.
pub struct MaxlabBackground(Background);

/// Uniform grid in the tortoise coordinate.
pub struct MaxlabGrid(RadialGrid);

/// Scalar-wave evolution of one harmonic mode.
pub struct MaxlabWaveSim {
    grid: RadialGrid,
    state: HarmonicWaveState,
    solver: WaveSolver,
}

/// First-order transport evolution of one harmonic mode.
pub struct MaxlabPriceSim {
    grid: RadialGrid,
    state: PriceState,
    solver: PriceSolver,
}

/// Outcome of [`maxlab_fit_power_law`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MaxlabFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub points: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> MaxlabStatus {
    match e {
        Error::Io { .. } | Error::Csv { .. } => MaxlabStatus::Io,
        Error::Analysis(AnalysisError::InsufficientData { .. }) => MaxlabStatus::InsufficientData,
        Error::Analysis(_) | Error::Background(BackgroundError::InsideHorizon { .. }) => MaxlabStatus::InvalidArgument,
        e if e.is_config() => MaxlabStatus::InvalidArgument,
        _ => MaxlabStatus::Numeric,
    }
}

/// Runs `f`, translating errors and panics into a status and the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> MaxlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MaxlabStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            MaxlabStatus::Panic
        }
    }
}

macro_rules! require {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return MaxlabStatus::NullPointer;
        })+
    };
}

/// Message of the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn maxlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn maxlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_background_new(mass: f64, out: *mut *mut MaxlabBackground) -> MaxlabStatus {
    require!(out);
    guard(|| {
        let bg = Background::new(mass)?;
        *out = Box::into_raw(Box::new(MaxlabBackground(bg)));
        Ok(())
    })
}

/// # Safety
/// `bg` must come from [`maxlab_background_new`] and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn maxlab_background_free(bg: *mut MaxlabBackground) {
    if !bg.is_null() {
        drop(Box::from_raw(bg));
    }
}

/// Tortoise coordinate of areal radius `r > 2M`.
///
/// # Safety
/// `bg` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_tortoise_from_r(bg: *const MaxlabBackground, r: f64, out: *mut f64) -> MaxlabStatus {
    require!(bg, out);
    guard(|| {
        *out = (*bg).0.tortoise_from_r(r)?;
        Ok(())
    })
}

/// Areal radius at tortoise coordinate `rs`.
///
/// # Safety
/// `bg` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_r_from_tortoise(bg: *const MaxlabBackground, rs: f64, out: *mut f64) -> MaxlabStatus {
    require!(bg, out);
    guard(|| {
        *out = (*bg).0.r_from_tortoise(rs)?;
        Ok(())
    })
}

/// Grid of `n` nodes on `[rs_min, rs_max]`; the background is copied.
///
/// # Safety
/// `bg` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_grid_new(
    bg: *const MaxlabBackground,
    rs_min: f64,
    rs_max: f64,
    n: usize,
    out: *mut *mut MaxlabGrid,
) -> MaxlabStatus {
    require!(bg, out);
    guard(|| {
        let grid = RadialGrid::new((*bg).0, rs_min, rs_max, n)?;
        *out = Box::into_raw(Box::new(MaxlabGrid(grid)));
        Ok(())
    })
}

/// # Safety
/// `grid` must come from [`maxlab_grid_new`] and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn maxlab_grid_free(grid: *mut MaxlabGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `grid` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_grid_len(grid: *const MaxlabGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// Copies `min(len, nodes)` tortoise coordinates into `out`.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_grid_rs(grid: *const MaxlabGrid, out: *mut f64, len: usize) -> MaxlabStatus {
    require!(grid, out);
    copy_out(&(*grid).0.rs()[..], out, len);
    MaxlabStatus::Ok
}

unsafe fn copy_out(src: &[f64], out: *mut f64, len: usize) {
    let n = src.len().min(len);
    ptr::copy_nonoverlapping(src.as_ptr(), out, n);
}

fn symmetry(s: MaxlabSymmetry) -> TimeSymmetry {
    match s {
        MaxlabSymmetry::TimeSymmetric => TimeSymmetry::TimeSymmetric,
        MaxlabSymmetry::Ingoing => TimeSymmetry::Ingoing,
        MaxlabSymmetry::Outgoing => TimeSymmetry::Outgoing,
    }
}

fn wave_state(
    grid: &RadialGrid,
    l: u32,
    m: i32,
    center: f64,
    width: f64,
    amplitude: f64,
    sym: MaxlabSymmetry,
) -> Result<HarmonicWaveState, Error> {
    let index = HarmonicIndex::new(l, m).map_err(|e| Error::Validation(e.to_string()))?;
    let spec = InitialDataSpec::gaussian(center, width, amplitude, symmetry(sym));
    Ok(init_wave(&spec, grid, index)?)
}

/// Scalar-wave simulation of mode `(l, m)` with Gaussian data; the grid is copied.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_wave_new(
    grid: *const MaxlabGrid,
    l: u32,
    m: i32,
    center: f64,
    width: f64,
    amplitude: f64,
    sym: MaxlabSymmetry,
    out: *mut *mut MaxlabWaveSim,
) -> MaxlabStatus {
    require!(grid, out);
    guard(|| {
        let grid = (*grid).0.clone();
        let state = wave_state(&grid, l, m, center, width, amplitude, sym)?;
        let solver = WaveSolver::new(&grid, l);
        *out = Box::into_raw(Box::new(MaxlabWaveSim { grid, state, solver }));
        Ok(())
    })
}

/// # Safety
/// `sim` must come from [`maxlab_wave_new`] and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn maxlab_wave_free(sim: *mut MaxlabWaveSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances `steps` RK4 steps of size `dt`.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_wave_step(sim: *mut MaxlabWaveSim, dt: f64, steps: u64) -> MaxlabStatus {
    require!(sim);
    let sim = &mut *sim;
    guard(|| {
        for _ in 0..steps {
            sim.solver.step(&mut sim.state, dt).map_err(Error::from)?;
        }
        Ok(())
    })
}

/// Current time, or NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_wave_time(sim: *const MaxlabWaveSim) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.state.t)
}

/// Energy of the current state, or NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_wave_energy(sim: *const MaxlabWaveSim) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| wave_energy(&s.state, &s.grid))
}

/// Copies the real and imaginary parts of the amplitude; either output may be null.
///
/// # Safety
/// `sim` must be a live handle; non-null outputs must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_wave_amplitude(
    sim: *const MaxlabWaveSim,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> MaxlabStatus {
    require!(sim);
    let s = &*sim;
    if !re.is_null() {
        copy_out(&s.state.a.re, re, len);
    }
    if !im.is_null() {
        copy_out(&s.state.a.im, im, len);
    }
    MaxlabStatus::Ok
}

/// Transport-system simulation of mode `(l, m)` started from the same Gaussian data as
/// [`maxlab_wave_new`]; the grid is copied.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_price_new(
    grid: *const MaxlabGrid,
    l: u32,
    m: i32,
    center: f64,
    width: f64,
    amplitude: f64,
    sym: MaxlabSymmetry,
    out: *mut *mut MaxlabPriceSim,
) -> MaxlabStatus {
    require!(grid, out);
    guard(|| {
        let grid = (*grid).0.clone();
        let wave = wave_state(&grid, l, m, center, width, amplitude, sym)?;
        let state = init_price_from_wave(&wave, &grid)?;
        let solver = PriceSolver::new(&grid, l);
        *out = Box::into_raw(Box::new(MaxlabPriceSim { grid, state, solver }));
        Ok(())
    })
}

/// # Safety
/// `sim` must come from [`maxlab_price_new`] and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn maxlab_price_free(sim: *mut MaxlabPriceSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances `steps` RK4 steps of size `dt`.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_price_step(sim: *mut MaxlabPriceSim, dt: f64, steps: u64) -> MaxlabStatus {
    require!(sim);
    let sim = &mut *sim;
    guard(|| {
        for _ in 0..steps {
            sim.solver.step(&mut sim.state, dt).map_err(Error::from)?;
        }
        Ok(())
    })
}

/// Current time, or NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_price_time(sim: *const MaxlabPriceSim) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.state.t)
}

/// T-energy of the mode, or NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_price_t_energy(sim: *const MaxlabPriceSim) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| mode_t_energy(&s.state, &s.grid))
}

/// L2 norm of the constraint `a_rs - lambda (b + c) / 2`, or NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxlab_price_constraint(sim: *const MaxlabPriceSim) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| constraint_residual(&s.state, &s.grid))
}

/// Copies the real parts of `(b, a, c)`; any output may be null.
///
/// # Safety
/// `sim` must be a live handle; non-null outputs must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_price_fields(
    sim: *const MaxlabPriceSim,
    b: *mut f64,
    a: *mut f64,
    c: *mut f64,
    len: usize,
) -> MaxlabStatus {
    require!(sim);
    let s = &*sim;
    for (src, dst) in [(&s.state.b.re, b), (&s.state.a.re, a), (&s.state.c.re, c)] {
        if !dst.is_null() {
            copy_out(src, dst, len);
        }
    }
    MaxlabStatus::Ok
}

/// Fits `A x^p` to the envelope of `(x[i], y[i])` restricted to `[x_min, x_max]`.
///
/// # Safety
/// `x` and `y` must be valid for `n` reads and `out` for writes.
#[no_mangle]
pub unsafe extern "C" fn maxlab_fit_power_law(
    x: *const f64,
    y: *const f64,
    n: usize,
    x_min: f64,
    x_max: f64,
    out: *mut MaxlabFit,
) -> MaxlabStatus {
    require!(x, y, out);
    guard(|| {
        let xs = std::slice::from_raw_parts(x, n);
        let ys = std::slice::from_raw_parts(y, n);
        let series: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        let fit = fit_power_law(&series, (x_min, x_max))?;
        *out = MaxlabFit { exponent: fit.exponent, amplitude: fit.amplitude, r_squared: fit.r_squared, points: fit.points.len() };
        Ok(())
    })
}

/// Runs a CLI command (`evolve`, `verify`, `decay-fit`, `energy-report`, `static`) and
/// returns its exit code. `out_dir` may be null; `resolution_scale` is 1, 2 or 4.
/// Returns -1 for an unknown command or invalid arguments.
///
/// # Safety
/// `command` and `config_path` must be NUL-terminated strings; `out_dir` null or one.
#[no_mangle]
pub unsafe extern "C" fn maxlab_run_command(
    command: *const c_char,
    config_path: *const c_char,
    out_dir: *const c_char,
    resolution_scale: u32,
) -> i32 {
    if command.is_null() || config_path.is_null() {
        set_error("null pointer: command or config_path");
        return -1;
    }
    let text = |p: *const c_char| CStr::from_ptr(p).to_str().map(str::to_owned);
    let (Ok(name), Ok(config)) = (text(command), text(config_path)) else {
        set_error("arguments are not valid UTF-8");
        return -1;
    };
    let out = if out_dir.is_null() {
        None
    } else {
        match text(out_dir) {
            Ok(s) => Some(PathBuf::from(s)),
            Err(_) => {
                set_error("out_dir is not valid UTF-8");
                return -1;
            }
        }
    };
    let scale = match resolution_scale {
        1 => Scale::One,
        2 => Scale::Two,
        4 => Scale::Four,
        s => {
            set_error(format!("resolution_scale must be 1, 2 or 4, got {s}"));
            return -1;
        }
    };
    let args = CommonArgs { config: PathBuf::from(config), out, resolution_scale: scale };
    let cmd = match name.as_str() {
        "evolve" => Command::Evolve(args),
        "verify" => Command::Verify(args),
        "decay-fit" => Command::DecayFit(args),
        "energy-report" => Command::EnergyReport(args),
        "static" => Command::Static(args),
        other => {
            set_error(format!("unknown command '{other}'"));
            return -1;
        }
    };
    match catch_unwind(|| run_command(&cmd).code()) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            -1
        }
    }
}

