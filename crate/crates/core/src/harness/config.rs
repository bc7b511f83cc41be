//! Line-based `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Indexed entries (`mode.N`, `init.N`,
//! `probe.N`, `ray.N`) are ordered by `N`. Every key is optional; the defaults are listed
//! on [`RunConfig::default`].

use crate::analysis::{Component, DecayConfig, RayKind, RaySpec, DEFAULT_PHI, DEFAULT_THETA};
use crate::background::{Background, RadialGrid};
use crate::energetics::MultiplierConfig;
use crate::error::{Error, Result};
use crate::solver::run::{EvolveSpec, ModeConfig};
use crate::solver::{InitialDataSpec, InitialKind, TimeSymmetry};
use crate::spectral::HarmonicIndex;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub rs_min: f64,
    pub rs_max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub cadence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub energies: bool,
    pub conformal_identity: bool,
    /// Window `[t1, t2]` of the conformal identity check.
    pub conformal_window: (f64, f64),
    pub morawetz: Option<MultiplierConfig>,
    pub hardy_suite: bool,
    pub hardy_samples: usize,
    pub hardy_seed: u64,
    pub local_decay: bool,
    pub decay_report: bool,
    pub decay: DecayConfig,
}

/// Parameters of the `static` command: a monopole on `r in [r_min, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticConfig {
    pub q_e: f64,
    pub q_b: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mass: f64,
    pub grid: GridConfig,
    pub cfl: f64,
    pub t_final: f64,
    pub modes: Vec<ModeConfig>,
    pub probes: Vec<f64>,
    pub probe_theta: f64,
    pub probe_phi: f64,
    pub rays: Vec<RaySpec>,
    pub output: OutputConfig,
    pub diagnostics: Diagnostics,
    pub surface: (f64, f64),
    pub static_check: StaticConfig,
    /// The `key = value` lines as read, for the manifest.
    pub source: String,
}

impl Default for RunConfig {
    /// `mass = 1`, `grid = [-200, 200]` with `n = 4097`, `cfl = 0.5`, `t_final = 200`,
    /// no modes, probes or rays, output to `out` every `1`, surface band `[2.5, 4]`,
    /// all diagnostics on with the multiplier at `b = 0.1`, `sigma = 1.5`, start `10`.
    fn default() -> Self {
        RunConfig {
            mass: 1.0,
            grid: GridConfig { rs_min: -200.0, rs_max: 200.0, n: 4097 },
            cfl: 0.5,
            t_final: 200.0,
            modes: Vec::new(),
            probes: Vec::new(),
            probe_theta: DEFAULT_THETA,
            probe_phi: DEFAULT_PHI,
            rays: Vec::new(),
            output: OutputConfig { directory: PathBuf::from("out"), cadence: 1.0 },
            diagnostics: Diagnostics {
                energies: true,
                conformal_identity: true,
                conformal_window: (1.0, 100.0),
                morawetz: Some(MultiplierConfig::default()),
                hardy_suite: true,
                hardy_samples: 1000,
                hardy_seed: 7,
                local_decay: true,
                decay_report: true,
                decay: DecayConfig::default(),
            },
            surface: (2.5, 4.0),
            static_check: StaticConfig { q_e: 1.0, q_b: 0.0, r_min: 2.001, r_max: 1000.0, n: 100_001, steps: 10 },
            source: String::new(),
        }
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse { line, message: format!("{key}: expected a finite number, got '{v}'") })
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(Error::Parse { line, message: format!("{key}: expected true or false, got '{v}'") }),
    }
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("{key}: expected a nonnegative integer, got '{v}'") })
}

/// `name=value` pairs after the leading word of a list value.
fn pairs<'a>(line: usize, key: &str, items: impl Iterator<Item = &'a str>) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse { line, message: format!("{key}: expected name=value, got '{item}'") })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn take_f64(line: usize, key: &str, map: &mut BTreeMap<String, String>, name: &str, default: f64) -> Result<f64> {
    match map.remove(name) {
        Some(v) => parse_f64(line, &format!("{key}.{name}"), &v),
        None => Ok(default),
    }
}

fn reject_rest(line: usize, key: &str, map: BTreeMap<String, String>) -> Result<()> {
    match map.keys().next() {
        Some(k) => Err(Error::Parse { line, message: format!("{key}: unknown field '{k}'") }),
        None => Ok(()),
    }
}

fn parse_mode(line: usize, key: &str, v: &str) -> Result<HarmonicIndex> {
    let mut map = pairs(line, key, v.split(',').map(str::trim).filter(|s| !s.is_empty()))?;
    let l = map.remove("l").ok_or_else(|| Error::Parse { line, message: format!("{key}: missing l") })?;
    let m = map.remove("m").unwrap_or_else(|| "0".into());
    reject_rest(line, key, map)?;
    let l: u32 = l.parse().map_err(|_| Error::Parse { line, message: format!("{key}: bad l '{l}'") })?;
    let m: i32 = m.parse().map_err(|_| Error::Parse { line, message: format!("{key}: bad m '{m}'") })?;
    HarmonicIndex::new(l, m).map_err(|e| Error::Parse { line, message: format!("{key}: {e}") })
}

fn parse_init(line: usize, key: &str, v: &str, base: &Path) -> Result<InitialDataSpec> {
    let mut parts = v.split(',').map(str::trim).filter(|s| !s.is_empty());
    let kind = parts.next().unwrap_or("");
    let mut map = pairs(line, key, parts)?;
    let spec = match kind {
        "zero" => InitialDataSpec::gaussian(0.0, 1.0, 0.0, TimeSymmetry::TimeSymmetric),
        "gaussian" => {
            let center = take_f64(line, key, &mut map, "center", 0.0)?;
            let width = take_f64(line, key, &mut map, "width", 4.0)?;
            let amplitude = take_f64(line, key, &mut map, "amplitude", 1.0)?;
            let symmetry = match map.remove("symmetry").as_deref() {
                None | Some("time_symmetric") => TimeSymmetry::TimeSymmetric,
                Some("ingoing") => TimeSymmetry::Ingoing,
                Some("outgoing") => TimeSymmetry::Outgoing,
                Some(s) => return Err(Error::Parse { line, message: format!("{key}: unknown symmetry '{s}'") }),
            };
            InitialDataSpec::gaussian(center, width, amplitude, symmetry)
        }
        "static" => {
            let q_e = take_f64(line, key, &mut map, "q_e", 1.0)?;
            let q_b = take_f64(line, key, &mut map, "q_b", 0.0)?;
            InitialDataSpec::static_charge(q_e, q_b)
        }
        "table" => {
            let path = map.remove("path").ok_or_else(|| Error::Parse { line, message: format!("{key}: missing path") })?;
            let rows = read_table(&base.join(path)).map_err(|e| Error::Parse { line, message: format!("{key}: {e}") })?;
            InitialDataSpec { kind: InitialKind::Table(rows) }
        }
        _ => return Err(Error::Parse { line, message: format!("{key}: unknown initial data kind '{kind}'") }),
    };
    reject_rest(line, key, map)?;
    Ok(spec)
}

/// Reads `rs, re_a, im_a, re_adot, im_adot` rows with a header line.
fn read_table(path: &Path) -> std::result::Result<Vec<[f64; 5]>, String> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() != 5 {
            return Err(format!("expected 5 columns, got {}", rec.len()));
        }
        let mut row = [0.0; 5];
        for (j, f) in rec.iter().enumerate() {
            row[j] = f.trim().parse().map_err(|_| format!("bad number '{f}'"))?;
        }
        rows.push(row);
    }
    Ok(rows)
}

fn parse_ray(line: usize, key: &str, v: &str) -> Result<RaySpec> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(Error::Parse { line, message: format!("{key}: expected kind,value[,component]") });
    }
    let kind: RayKind = parts[0].parse().map_err(|e| Error::Parse { line, message: format!("{key}: {e}") })?;
    let value = parse_f64(line, key, parts[1])?;
    let component = match parts.get(2) {
        Some(c) => c.parse().map_err(|e| Error::Parse { line, message: format!("{key}: {e}") })?,
        None => Component::Phi0,
    };
    Ok(RaySpec::new(kind, value, component))
}

fn index_of(line: usize, key: &str, rest: &str) -> Result<u32> {
    rest.parse::<u32>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse { line, message: format!("unknown key '{key}'") })
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses and validates; `base` resolves relative table paths.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut modes = BTreeMap::new();
        let mut inits = BTreeMap::new();
        let mut probes = BTreeMap::new();
        let mut rays = BTreeMap::new();
        let mut seen = BTreeMap::new();
        let mut source = String::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, message: format!("expected 'key = value', got '{content}'") })?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(prev) = seen.insert(key.to_string(), line) {
                return Err(Error::Parse { line, message: format!("duplicate key '{key}' (first on line {prev})") });
            }
            let _ = writeln!(source, "{key} = {value}");
            let d = &mut cfg.diagnostics;
            match key {
                "mass" => cfg.mass = parse_f64(line, key, value)?,
                "grid.rs_min" => cfg.grid.rs_min = parse_f64(line, key, value)?,
                "grid.rs_max" => cfg.grid.rs_max = parse_f64(line, key, value)?,
                "grid.n" => cfg.grid.n = parse_usize(line, key, value)?,
                "cfl" => cfg.cfl = parse_f64(line, key, value)?,
                "t_final" => cfg.t_final = parse_f64(line, key, value)?,
                "probe.theta" => cfg.probe_theta = parse_f64(line, key, value)?,
                "probe.phi" => cfg.probe_phi = parse_f64(line, key, value)?,
                "output.directory" => cfg.output.directory = PathBuf::from(value),
                "output.cadence" => cfg.output.cadence = parse_f64(line, key, value)?,
                "surface.r_min" => cfg.surface.0 = parse_f64(line, key, value)?,
                "surface.r_max" => cfg.surface.1 = parse_f64(line, key, value)?,
                "diagnostics.energies" => d.energies = parse_bool(line, key, value)?,
                "diagnostics.conformal_identity" => d.conformal_identity = parse_bool(line, key, value)?,
                "diagnostics.conformal.t1" => d.conformal_window.0 = parse_f64(line, key, value)?,
                "diagnostics.conformal.t2" => d.conformal_window.1 = parse_f64(line, key, value)?,
                "diagnostics.morawetz" => {
                    let on = parse_bool(line, key, value)?;
                    d.morawetz = match (on, d.morawetz) {
                        (true, Some(m)) => Some(m),
                        (true, None) => Some(MultiplierConfig::default()),
                        (false, _) => None,
                    };
                }
                "diagnostics.morawetz.b" | "diagnostics.morawetz.sigma" | "diagnostics.morawetz.start_time" => {
                    let x = parse_f64(line, key, value)?;
                    if let Some(m) = d.morawetz.as_mut() {
                        match key {
                            "diagnostics.morawetz.b" => m.b = x,
                            "diagnostics.morawetz.sigma" => m.sigma = x,
                            _ => m.start_time = x,
                        }
                    }
                }
                "diagnostics.hardy_suite" => d.hardy_suite = parse_bool(line, key, value)?,
                "diagnostics.hardy.samples" => d.hardy_samples = parse_usize(line, key, value)?,
                "diagnostics.hardy.seed" => d.hardy_seed = parse_usize(line, key, value)? as u64,
                "diagnostics.local_decay" => d.local_decay = parse_bool(line, key, value)?,
                "diagnostics.decay_report" => d.decay_report = parse_bool(line, key, value)?,
                "diagnostics.decay.min_start" => d.decay.min_start = parse_f64(line, key, value)?,
                "diagnostics.decay.outgoing_t1" => d.decay.outgoing_window.0 = parse_f64(line, key, value)?,
                "diagnostics.decay.outgoing_t2" => d.decay.outgoing_window.1 = parse_f64(line, key, value)?,
                "diagnostics.decay.horizon_rs_min" => d.decay.horizon_band.0 = parse_f64(line, key, value)?,
                "diagnostics.decay.horizon_rs_max" => d.decay.horizon_band.1 = parse_f64(line, key, value)?,
                "static.q_e" => cfg.static_check.q_e = parse_f64(line, key, value)?,
                "static.q_b" => cfg.static_check.q_b = parse_f64(line, key, value)?,
                "static.r_min" => cfg.static_check.r_min = parse_f64(line, key, value)?,
                "static.r_max" => cfg.static_check.r_max = parse_f64(line, key, value)?,
                "static.n" => cfg.static_check.n = parse_usize(line, key, value)?,
                "static.steps" => cfg.static_check.steps = parse_usize(line, key, value)?,
                _ => {
                    let (section, rest) = key.split_once('.').unwrap_or((key, ""));
                    match section {
                        "mode" => {
                            modes.insert(index_of(line, key, rest)?, (line, parse_mode(line, key, value)?));
                        }
                        "init" => {
                            inits.insert(index_of(line, key, rest)?, (line, parse_init(line, key, value, base)?));
                        }
                        "probe" => {
                            probes.insert(index_of(line, key, rest)?, parse_f64(line, key, value)?);
                        }
                        "ray" => {
                            rays.insert(index_of(line, key, rest)?, parse_ray(line, key, value)?);
                        }
                        _ => return Err(Error::Parse { line, message: format!("unknown key '{key}'") }),
                    }
                }
            }
        }
        for (n, (line, _)) in &inits {
            if !modes.contains_key(n) {
                return Err(Error::Parse { line: *line, message: format!("init.{n} has no matching mode.{n}") });
            }
        }
        cfg.modes = modes
            .into_iter()
            .map(|(n, (_, index))| ModeConfig {
                index,
                init: inits
                    .remove(&n)
                    .map(|(_, s)| s)
                    .unwrap_or_else(|| InitialDataSpec::gaussian(0.0, 1.0, 0.0, TimeSymmetry::TimeSymmetric)),
            })
            .collect();
        cfg.probes = probes.into_values().collect();
        cfg.rays = rays.into_values().collect();
        cfg.source = source;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the invariants; the error names the violated one.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if !(self.mass > 0.0) {
            return bad(format!("mass must be positive, got {}", self.mass));
        }
        if self.grid.n < 16 {
            return bad(format!("grid.n must be at least 16, got {}", self.grid.n));
        }
        if !(self.grid.rs_min < 0.0 && self.grid.rs_max > 0.0) {
            return bad(format!("grid must satisfy rs_min < 0 < rs_max, got [{}, {}]", self.grid.rs_min, self.grid.rs_max));
        }
        if !(self.cfl > 0.0) {
            return bad(format!("cfl must be positive, got {}", self.cfl));
        }
        if !(self.t_final >= 0.0) {
            return bad(format!("t_final must be nonnegative, got {}", self.t_final));
        }
        if !(self.output.cadence > 0.0) {
            return bad(format!("output.cadence must be positive, got {}", self.output.cadence));
        }
        let inside = |rs: f64| rs >= self.grid.rs_min && rs <= self.grid.rs_max;
        for &p in &self.probes {
            if !inside(p) {
                return bad(format!("probe rs = {p} lies outside the grid"));
            }
        }
        let (lo, hi, t) = (self.grid.rs_min, self.grid.rs_max, self.t_final);
        for r in &self.rays {
            let ok = match r.kind {
                RayKind::FixedRs => inside(r.value),
                RayKind::Outgoing => -r.value <= hi && t - r.value >= lo,
                RayKind::Ingoing => r.value >= lo && r.value - t <= hi,
                RayKind::FixedTSlice => r.value >= 0.0 && r.value <= t,
            };
            if !ok {
                return bad(format!("ray {},{} does not meet the grid during the run", r.kind_name(), r.value));
            }
        }
        let horizon = 2.0 * self.mass;
        if !(self.surface.0 > horizon && self.surface.1 > self.surface.0) {
            return bad(format!("surface band must satisfy 2M < r_min < r_max, got [{}, {}]", self.surface.0, self.surface.1));
        }
        if let Some(m) = &self.diagnostics.morawetz {
            m.validate().map_err(|e| Error::Validation(e.to_string()))?;
        }
        let (t1, t2) = self.diagnostics.conformal_window;
        if !(t1 >= 0.0 && t2 > t1) {
            return bad(format!("conformal window must satisfy 0 <= t1 < t2, got [{t1}, {t2}]"));
        }
        let s = &self.static_check;
        if !(s.r_min > horizon && s.r_max > s.r_min && s.n >= 16) {
            return bad("static check needs 2M < r_min < r_max and n >= 16".into());
        }
        Ok(())
    }

    /// The grid after scaling the spacing by `1 / scale`; nodes of the base grid are kept.
    pub fn grid(&self, scale: usize) -> Result<RadialGrid> {
        let bg = Background::new(self.mass)?;
        let n = (self.grid.n - 1) * scale.max(1) + 1;
        let degrees: Vec<u32> = self.modes.iter().map(|m| m.index.l).collect();
        Ok(RadialGrid::with_potentials(bg, self.grid.rs_min, self.grid.rs_max, n, &degrees)?)
    }

    pub fn evolve_spec(&self, scale: usize, keep_snapshots: bool) -> Result<EvolveSpec> {
        Ok(EvolveSpec {
            grid: self.grid(scale)?,
            modes: self.modes.clone(),
            cfl: self.cfl,
            t_final: self.t_final,
            cadence: self.output.cadence,
            probes: self.probes.clone(),
            rays: self.rays.clone(),
            surface: self.surface,
            multiplier: self.diagnostics.morawetz,
            keep_snapshots,
            threads: worker_threads(),
        })
    }

    /// Decay settings with the probe angle applied.
    pub fn decay_config(&self) -> DecayConfig {
        DecayConfig { theta: self.probe_theta, phi: self.probe_phi, ..self.diagnostics.decay }
    }
}

/// Worker cap from `TOOL_THREADS` (or `MAXLAB_THREADS`); `None` lets the pool decide.
pub fn worker_threads() -> Option<usize> {
    ["TOOL_THREADS", "MAXLAB_THREADS"]
        .iter()
        .find_map(|k| std::env::var(k).ok())
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::parse(text, Path::new("."))
    }

    #[test]
    fn empty_is_default() {
        let cfg = parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn small_grid_rejected() {
        assert!(matches!(parse("grid.n = 8"), Err(Error::Validation(m)) if m.contains("at least 16")));
    }

    #[test]
    fn parse_error_has_line() {
        match parse("mass = 1\n\ngrid.bogus = 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("cfl 0.5"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("cfl = x"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn modes_and_rays() {
        let cfg = parse(
            "mode.2 = l=2,m=1\nmode.1 = l=1,m=0\ninit.1 = gaussian,center=-10,width=3,symmetry=outgoing\n\
             ray.1 = outgoing,20.0\nray.2 = fixed_rs,0,phim1\nprobe.1 = 5 # comment\n",
        )
        .unwrap();
        assert_eq!(cfg.modes.len(), 2);
        assert_eq!(cfg.modes[0].index.l, 1);
        assert_eq!(cfg.modes[0].init, InitialDataSpec::gaussian(-10.0, 3.0, 1.0, TimeSymmetry::Outgoing));
        assert_eq!(cfg.rays[1].component, Component::PhiM1);
        assert_eq!(cfg.probes, vec![5.0]);
    }

    #[test]
    fn orphan_init_and_bad_probe() {
        assert!(matches!(parse("init.1 = zero"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("probe.1 = 500"), Err(Error::Validation(_))));
        assert!(matches!(parse("mode.1 = l=1,m=2"), Err(Error::Parse { .. })));
    }
}
