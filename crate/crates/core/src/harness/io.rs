//! CSV series, the run manifest, and reloading probe data for `decay-fit`.

use super::config::RunConfig;
use crate::analysis::{sample_along_ray, DecayRow, ModeProbes, ProbeRecord};
use crate::background::{Background, RadialGrid};
use crate::error::{Error, Result};
use crate::fields::{coordinate_components, reconstruct_from_samples, ModalSample};
use crate::solver::run::RunSeries;
use crate::solver::InitialKind;
use num_complex::Complex64;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const ENERGIES: &str = "energies.csv";
pub const PROBES: &str = "probes.csv";
pub const STATIC_PROBES: &str = "static_probes.csv";
pub const RAYS: &str = "rays.csv";
pub const DECAY: &str = "decay.csv";
pub const SURFACE: &str = "surface.csv";
pub const MODAL_PROBES: &str = "modal_probes.csv";
pub const MANIFEST: &str = "manifest.txt";

/// Shortest decimal that reads back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Writes `rows` under `header` to `directory/name`, creating the directory.
pub fn write_series<I>(directory: &Path, name: &str, header: &[String], rows: I) -> Result<PathBuf>
where
    I: IntoIterator<Item = Vec<String>>,
{
    std::fs::create_dir_all(directory).map_err(|e| Error::io(format!("creating {}", directory.display()), e))?;
    let path = directory.join(name);
    let csv_err = |e| Error::Csv { context: path.display().to_string(), source: e };
    let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    Ok(path)
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Column count of `energies.csv` for `modes` modes.
pub fn energies_columns(modes: usize) -> usize {
    5 + 2 * modes
}

pub fn write_energies(directory: &Path, run: &RunSeries) -> Result<PathBuf> {
    let mut header = vec!["t".to_string()];
    for m in &run.modes {
        let (l, mm) = (m.config.index.l, m.config.index.m);
        header.push(format!("E_wave[{l},{mm}]"));
        header.push(format!("E_conf[{l},{mm}]"));
    }
    header.extend(strings(&["E_T", "E_K", "trap_increment", "conf_residual"]));
    let rows = crate::analysis::energy_reports(run).into_iter().map(|r| {
        let mut row = vec![fmt_f64(r.t)];
        for (e, c) in r.e_wave.iter().zip(&r.e_conf_wave) {
            row.push(fmt_f64(*e));
            row.push(fmt_f64(*c));
        }
        row.push(fmt_f64(r.e_t_maxwell));
        row.push(fmt_f64(r.e_k_maxwell));
        row.push(fmt_f64(r.trapping_integral_increment));
        row.push(fmt_f64(r.identity_residuals.get("conformal_maxwell").copied().unwrap_or(0.0)));
        row
    });
    write_series(directory, ENERGIES, &header, rows)
}

fn probe_rows(run: &RunSeries, theta: f64, phi: f64, static_modes: bool) -> Vec<Vec<String>> {
    let bg = run.grid.background();
    let mut out = Vec::new();
    for (k, &t) in run.times.iter().enumerate() {
        for (p, &rs) in run.probes.iter().enumerate() {
            let samples: Vec<ModalSample> = run
                .modes
                .iter()
                .filter(|m| (m.config.index.l == 0) == static_modes)
                .map(|m| m.probes[k][p])
                .collect();
            let cap = coordinate_components(&samples, theta, phi).cap0;
            let mut row = vec![fmt_f64(t), fmt_f64(rs), fmt_f64(cap.re), fmt_f64(cap.im)];
            if !static_modes {
                let small = bg
                    .radius(rs)
                    .map(|radius| reconstruct_from_samples(&samples, theta, phi, radius))
                    .map(|s| [s.phi1.norm(), s.phi0.norm(), s.phim1.norm()])
                    .unwrap_or([f64::NAN; 3]);
                row.extend(small.iter().map(|x| fmt_f64(*x)));
            }
            out.push(row);
        }
    }
    out
}

/// `probes.csv` holds the radiative modes (`l >= 1`); `Phi_0` at the probe angle is `(re_a, im_a)`.
pub fn write_probes(directory: &Path, run: &RunSeries, theta: f64, phi: f64) -> Result<PathBuf> {
    let header = strings(&["t", "rs", "re_a", "im_a", "abs_phi1", "abs_phi0", "abs_phim1"]);
    write_series(directory, PROBES, &header, probe_rows(run, theta, phi, false))
}

/// The `l = 0` contribution at the probes, written only when such a mode is configured.
pub fn write_static_probes(directory: &Path, run: &RunSeries, theta: f64, phi: f64) -> Result<Option<PathBuf>> {
    if !run.modes.iter().any(|m| m.config.index.l == 0) {
        return Ok(None);
    }
    let header = strings(&["t", "rs", "re_a", "im_a"]);
    write_series(directory, STATIC_PROBES, &header, probe_rows(run, theta, phi, true)).map(Some)
}

pub fn write_rays(directory: &Path, run: &RunSeries, theta: f64, phi: f64) -> Result<PathBuf> {
    let header = strings(&["ray_id", "param", "abs_value"]);
    let mut rows = Vec::new();
    for j in 0..run.rays.len() {
        let series = sample_along_ray(run, j, theta, phi);
        for (param, v) in series.points {
            rows.push(vec![(j + 1).to_string(), fmt_f64(param), fmt_f64(v)]);
        }
    }
    write_series(directory, RAYS, &header, rows)
}

pub fn write_decay(directory: &Path, rows: &[DecayRow]) -> Result<PathBuf> {
    let header = strings(&["row_id", "description", "exponent", "tolerance", "bound", "pass"]);
    let out = rows.iter().map(|r| {
        vec![
            r.id.clone(),
            r.description.clone(),
            r.exponent.map(fmt_f64).unwrap_or_default(),
            fmt_f64(r.tolerance),
            fmt_f64(r.bound),
            r.status.to_string(),
        ]
    });
    write_series(directory, DECAY, &header, out)
}

/// Radiative surface energy per stored time and the per-mode probe samples.
pub fn write_probe_record(directory: &Path, record: &ProbeRecord) -> Result<()> {
    let header = strings(&["t", "surface"]);
    let rows = record.times.iter().zip(&record.surface).map(|(t, s)| vec![fmt_f64(*t), fmt_f64(*s)]);
    write_series(directory, SURFACE, &header, rows)?;
    let header = strings(&["t", "l", "m", "rs", "re_b", "im_b", "re_a", "im_a", "re_c", "im_c"]);
    let mut rows = Vec::new();
    for (k, &t) in record.times.iter().enumerate() {
        for m in &record.modes {
            for (p, s) in m.samples[k].iter().enumerate() {
                let mut row = vec![fmt_f64(t), m.index.l.to_string(), m.index.m.to_string(), fmt_f64(record.probes[p])];
                for z in [s.b, s.a, s.c] {
                    row.push(fmt_f64(z.re));
                    row.push(fmt_f64(z.im));
                }
                rows.push(row);
            }
        }
    }
    write_series(directory, MODAL_PROBES, &header, rows)?;
    Ok(())
}

fn read_rows(path: &Path) -> Result<Vec<csv::StringRecord>> {
    let csv_err = |e| Error::Csv { context: path.display().to_string(), source: e };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.records().collect::<std::result::Result<Vec<_>, _>>().map_err(csv_err)
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, j: usize) -> Result<T> {
    rec.get(j)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Validation(format!("{}: malformed column {j} in '{}'", path.display(), rec.as_slice())))
}

/// Rebuilds the decay inputs from `surface.csv` and `modal_probes.csv` of a finished run.
pub fn read_probe_record(directory: &Path, cfg: &RunConfig) -> Result<ProbeRecord> {
    let surface_path = directory.join(SURFACE);
    let mut times = Vec::new();
    let mut surface = Vec::new();
    for rec in read_rows(&surface_path)? {
        times.push(field::<f64>(&surface_path, &rec, 0)?);
        surface.push(field::<f64>(&surface_path, &rec, 1)?);
    }
    let modal_path = directory.join(MODAL_PROBES);
    let probes = cfg.probes.clone();
    let mut modes: Vec<ModeProbes> = cfg
        .modes
        .iter()
        .map(|m| ModeProbes {
            index: m.index,
            pulse_center: match &m.init.kind {
                InitialKind::Gaussian { center, amplitude, .. } if *amplitude != 0.0 => Some(*center),
                _ => None,
            },
            samples: vec![Vec::with_capacity(probes.len()); times.len()],
        })
        .collect();
    let row_of: BTreeMap<u64, usize> = times.iter().enumerate().map(|(k, t)| (t.to_bits(), k)).collect();
    for rec in read_rows(&modal_path)? {
        let t: f64 = field(&modal_path, &rec, 0)?;
        let (l, m): (u32, i32) = (field(&modal_path, &rec, 1)?, field(&modal_path, &rec, 2)?);
        let mut v = [0.0; 6];
        for (j, x) in v.iter_mut().enumerate() {
            *x = field(&modal_path, &rec, 4 + j)?;
        }
        let k = *row_of
            .get(&t.to_bits())
            .ok_or_else(|| Error::Validation(format!("{}: time {t} not in {SURFACE}", modal_path.display())))?;
        let mode = modes
            .iter_mut()
            .find(|x| x.index.l == l && x.index.m == m)
            .ok_or_else(|| Error::Validation(format!("{}: mode l={l} m={m} is not configured", modal_path.display())))?;
        mode.samples[k].push(ModalSample {
            index: mode.index,
            b: Complex64::new(v[0], v[1]),
            a: Complex64::new(v[2], v[3]),
            c: Complex64::new(v[4], v[5]),
        });
    }
    for m in &modes {
        if m.samples.iter().any(|s| s.len() != probes.len()) {
            return Err(Error::Validation(format!(
                "{}: probe samples for l={} m={} do not match the configured probes",
                modal_path.display(),
                m.index.l,
                m.index.m
            )));
        }
    }
    Ok(ProbeRecord {
        background: Background::new(cfg.mass)?,
        times,
        probes,
        modes,
        surface,
        surface_band: cfg.surface,
    })
}

/// SHA-256 over the mass, node count and node positions.
pub fn grid_hash(grid: &RadialGrid) -> String {
    let mut h = Sha256::new();
    h.update(grid.mass().to_le_bytes());
    h.update((grid.len() as u64).to_le_bytes());
    for rs in grid.rs() {
        h.update(rs.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Outcome of one named check, as reported by `verify` and stored in the manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub grid_hash: String,
    pub wall_clock_seconds: f64,
    pub checks: &'a [CheckLine],
    pub files: &'a [PathBuf],
}

/// Writes the manifest; call after every other output.
pub fn write_manifest(directory: &Path, m: &Manifest<'_>) -> Result<PathBuf> {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "command = {}", m.command);
    let _ = writeln!(s, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "grid_hash = {}", m.grid_hash);
    let _ = writeln!(s, "wall_clock_seconds = {:.3}", m.wall_clock_seconds);
    for f in m.files {
        let _ = writeln!(s, "file = {}", f.file_name().and_then(|x| x.to_str()).unwrap_or(""));
    }
    for c in m.checks {
        let _ = writeln!(s, "check.{} = {} ({})", c.name, if c.pass { "pass" } else { "fail" }, c.detail);
    }
    let _ = writeln!(s, "[config]");
    s.push_str(&m.config.source);
    std::fs::create_dir_all(directory).map_err(|e| Error::io(format!("creating {}", directory.display()), e))?;
    let path = directory.join(MANIFEST);
    std::fs::write(&path, s).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    Ok(path)
}
