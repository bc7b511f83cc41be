use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn maxlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxlab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn shipped(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

const SMALL_RUN: &str = "\
grid.rs_min = -100
grid.rs_max = 100
grid.n = 801
t_final = 60
mode.1 = l=1,m=0
init.1 = gaussian,center=0,width=4,amplitude=1,symmetry=time_symmetric
mode.2 = l=2,m=-1
init.2 = gaussian,center=5,width=4,amplitude=0.5,symmetry=outgoing
probe.1 = 0
probe.2 = 10
ray.1 = outgoing,0,phi1
diagnostics.decay.min_start = 20
";

#[test]
fn zero_config_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxlab(&["verify", "--config", &shipped("zero.conf"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn static_with_short_range_fails_its_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.conf",
        "mode.1 = l=0,m=0\ninit.1 = static,q_e=1,q_b=0\nstatic.r_max = 50\nstatic.n = 20001\n",
    );
    let out = maxlab(&["static", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("small.conf", "grid.n = 8\n"), ("unknown.conf", "grid.nodes = 100\n")] {
        let cfg = write_config(dir.path(), name, text);
        let out = maxlab(&["verify", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("error: verify: config"), "{err}");
    }
}

#[test]
fn io_errors_exit_with_three() {
    let out = maxlab(&["verify", "--config", "/nonexistent/maxlab.conf"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("io"));
}

#[test]
fn numeric_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "huge.conf",
        "grid.n = 257\nt_final = 5\nmode.1 = l=1,m=0\ninit.1 = gaussian,center=0,width=5,amplitude=1e308,symmetry=time_symmetric\n",
    );
    let out = maxlab(&["evolve", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("o").join("manifest.txt").exists());

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let cfg = write_config(dir.path(), "run.conf", SMALL_RUN);
    let out = maxlab(&["decay-fit", "--config", cfg.to_str().unwrap(), "--out", empty.to_str().unwrap()]);
    assert_ne!(code(&out), 0);
}

#[test]
fn invalid_resolution_scale_is_rejected() {
    let out = maxlab(&["verify", "--config", &shipped("zero.conf"), "--resolution-scale", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn evolve_then_decay_fit_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.conf", SMALL_RUN);
    let out_dir = dir.path().join("run");
    let (c, o) = (cfg.to_str().unwrap(), out_dir.to_str().unwrap());
    let out = maxlab(&["evolve", "--config", c, "--out", o]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["energies.csv", "probes.csv", "rays.csv", "decay.csv", "manifest.txt"] {
        assert!(out_dir.join(file).exists(), "{file}");
    }

    let mut reader = csv::Reader::from_path(out_dir.join("energies.csv")).unwrap();
    let header = reader.headers().unwrap().clone();
    // t, two columns per mode, E_T, E_K, trap_increment, conf_residual.
    assert_eq!(header.len(), 5 + 2 * 2, "{header:?}");
    assert_eq!(&header[0], "t");
    assert_eq!(&header[1], "E_wave[1,0]");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 61);
    assert!(rows.iter().all(|r| r.len() == header.len()));

    let first = fs::read(out_dir.join("decay.csv")).unwrap();
    for _ in 0..2 {
        let out = maxlab(&["decay-fit", "--config", c, "--out", o]);
        assert!(code(&out) <= 1, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(fs::read(out_dir.join("decay.csv")).unwrap(), first);
    }
}

#[test]
fn zero_time_run_writes_single_row_and_header_only_rays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "z.conf", "grid.n = 257\nt_final = 0\nmode.1 = l=1,m=1\ninit.1 = zero\n");
    let out = maxlab(&["evolve", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rays = fs::read_to_string(dir.path().join("rays.csv")).unwrap();
    assert_eq!(rays.lines().count(), 1, "{rays}");
    assert_eq!(rays.trim(), "ray_id,param,abs_value");
    let energies = fs::read_to_string(dir.path().join("energies.csv")).unwrap();
    assert_eq!(energies.lines().count(), 2);
}

#[test]
fn quick_shipped_configs_verify() {
    for name in ["spectral.conf", "hardy.conf"] {
        let dir = tempfile::tempdir().unwrap();
        let out = maxlab(&["verify", "--config", &shipped(name), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn energy_report_prints_energies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.conf", SMALL_RUN);
    let out = maxlab(&["energy-report", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("energies.csv").exists());
}
