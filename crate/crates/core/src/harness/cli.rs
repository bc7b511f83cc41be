//! Command dispatch and exit codes.

use super::checks::{static_check, verify_suite};
use super::config::RunConfig;
use super::io::{self, CheckLine, Manifest};
use crate::analysis::{decay_report, DecayRow, ProbeRecord, RowStatus};
use crate::error::{Error, Result};
use crate::solver::run::{evolve_run, RunSeries};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "maxlab", version, about = "Maxwell fields on Schwarzschild: evolution, energy identities and decay fits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "4")]
    Four,
}

impl Scale {
    pub fn factor(self) -> usize {
        match self {
            Scale::One => 1,
            Scale::Two => 2,
            Scale::Four => 4,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Run configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Divide the grid spacing by this factor.
    #[arg(long, value_enum, default_value = "1")]
    pub resolution_scale: Scale,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Full run with all outputs.
    Evolve(CommonArgs),
    /// Identity and invariant suite; exits 1 on any failure.
    Verify(CommonArgs),
    /// Decay table from an existing run directory.
    DecayFit(CommonArgs),
    /// Energies only.
    EnergyReport(CommonArgs),
    /// Static monopole regression against the closed-form energy.
    Static(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Evolve(a) | Command::Verify(a) | Command::DecayFit(a) | Command::EnergyReport(a) | Command::Static(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Verify(_) => "verify",
            Command::DecayFit(_) => "decay-fit",
            Command::EnergyReport(_) => "energy-report",
            Command::Static(_) => "static",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    CheckFailed = 1,
    ConfigError = 2,
    NumericError = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_error(e: &Error) -> Self {
        if e.is_config() {
            ExitStatus::ConfigError
        } else {
            ExitStatus::NumericError
        }
    }
}

fn out_dir(cfg: &RunConfig, args: &CommonArgs) -> PathBuf {
    args.out.clone().unwrap_or_else(|| cfg.output.directory.clone())
}

fn decay_lines(rows: &[DecayRow]) -> Vec<CheckLine> {
    rows.iter()
        .map(|r| CheckLine {
            name: format!("decay.{}", r.id),
            detail: match (&r.status, r.exponent) {
                (RowStatus::NotEvaluated(why), _) => format!("not evaluated: {why}"),
                (_, Some(p)) => format!("exponent {p} vs bound {} + {}", r.bound, r.tolerance),
                _ => String::new(),
            },
            pass: r.status != RowStatus::Fail,
        })
        .collect()
}

fn print_decay(rows: &[DecayRow]) {
    for r in rows {
        let p = r.exponent.map(|p| format!("{p:.4}")).unwrap_or_else(|| "-".into());
        println!("{:<16} {:<14} p = {:<10} bound {} + {}  {}", r.id, r.status.to_string(), p, r.bound, r.tolerance, r.description);
    }
}

fn run_and_time(cfg: &RunConfig, args: &CommonArgs) -> Result<(RunSeries, f64)> {
    let start = Instant::now();
    let spec = cfg.evolve_spec(args.resolution_scale.factor(), false)?;
    let run = evolve_run(&spec)?;
    Ok((run, start.elapsed().as_secs_f64()))
}

fn evolve(cfg: &RunConfig, args: &CommonArgs, energies_only: bool) -> Result<ExitStatus> {
    let dir = out_dir(cfg, args);
    let (run, elapsed) = run_and_time(cfg, args)?;
    let (theta, phi) = (cfg.probe_theta, cfg.probe_phi);
    let mut files = vec![io::write_energies(&dir, &run)?];
    let mut checks = Vec::new();
    if !energies_only {
        files.push(io::write_probes(&dir, &run, theta, phi)?);
        files.extend(io::write_static_probes(&dir, &run, theta, phi)?);
        files.push(io::write_rays(&dir, &run, theta, phi)?);
        let record = ProbeRecord::from_run(&run);
        io::write_probe_record(&dir, &record)?;
        files.push(dir.join(io::SURFACE));
        files.push(dir.join(io::MODAL_PROBES));
        if cfg.diagnostics.decay_report {
            let rows = decay_report(&record, &cfg.decay_config());
            files.push(io::write_decay(&dir, &rows)?);
            print_decay(&rows);
            checks = decay_lines(&rows);
        }
    }
    finish(&dir, if energies_only { "energy-report" } else { "evolve" }, cfg, &run, elapsed, &checks, &files)?;
    println!("wrote {} files to {}", files.len() + 1, dir.display());
    Ok(ExitStatus::Ok)
}

fn finish(
    dir: &Path,
    command: &str,
    cfg: &RunConfig,
    run: &RunSeries,
    elapsed: f64,
    checks: &[CheckLine],
    files: &[PathBuf],
) -> Result<PathBuf> {
    io::write_manifest(
        dir,
        &Manifest {
            command,
            config: cfg,
            grid_hash: io::grid_hash(&run.grid),
            wall_clock_seconds: elapsed,
            checks,
            files,
        },
    )
}

fn verify(cfg: &RunConfig, args: &CommonArgs) -> Result<ExitStatus> {
    let (run, elapsed) = run_and_time(cfg, args)?;
    let checks = verify_suite(cfg, &run);
    for c in &checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    finish(&out_dir(cfg, args), "verify", cfg, &run, elapsed, &checks, &[])?;
    Ok(if checks.iter().all(|c| c.pass) { ExitStatus::Ok } else { ExitStatus::CheckFailed })
}

fn decay_fit(cfg: &RunConfig, args: &CommonArgs) -> Result<ExitStatus> {
    let dir = out_dir(cfg, args);
    let record = io::read_probe_record(&dir, cfg)?;
    let rows = decay_report(&record, &cfg.decay_config());
    io::write_decay(&dir, &rows)?;
    print_decay(&rows);
    Ok(if rows.iter().any(|r| r.status == RowStatus::Fail) { ExitStatus::CheckFailed } else { ExitStatus::Ok })
}

fn static_command(cfg: &RunConfig) -> Result<ExitStatus> {
    let s = &cfg.static_check;
    let r = static_check(cfg.mass, s)?;
    println!("static charge q_E = {} q_B = {} on r in [{}, {}] with {} nodes", s.q_e, s.q_b, s.r_min, s.r_max, s.n);
    println!("E_T quadrature        = {:.12}", r.e_t);
    println!("pi q^2 / M            = {:.12}  relative error {:.4e}", r.analytic, r.relative_error);
    println!("truncated closed form = {:.12}  relative error {:.4e}", r.truncated_analytic, r.truncated_relative_error);
    println!("max |d_t| over {} steps = {:.3e}", s.steps, r.max_time_derivative);
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
    Ok(if r.pass { ExitStatus::Ok } else { ExitStatus::CheckFailed })
}

/// Loads the configuration and runs `command`, reporting errors on stderr.
pub fn run_command(command: &Command) -> ExitStatus {
    let args = command.args();
    let result = RunConfig::from_path(&args.config).and_then(|cfg| match command {
        Command::Evolve(_) => evolve(&cfg, args, false),
        Command::EnergyReport(_) => evolve(&cfg, args, true),
        Command::Verify(_) => verify(&cfg, args),
        Command::DecayFit(_) => decay_fit(&cfg, args),
        Command::Static(_) => static_command(&cfg),
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {}: {e}", command.name());
            ExitStatus::from_error(&e)
        }
    }
}
