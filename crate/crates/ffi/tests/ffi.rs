use maxlab_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    let p = maxlab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn background_round_trip() {
    unsafe {
        let mut bg = ptr::null_mut();
        assert_eq!(maxlab_background_new(1.0, &mut bg), MaxlabStatus::Ok);
        let mut rs = 0.0;
        assert_eq!(maxlab_tortoise_from_r(bg, 3.0, &mut rs), MaxlabStatus::Ok);
        assert!(rs.abs() < 1e-12);
        let mut r = 0.0;
        assert_eq!(maxlab_r_from_tortoise(bg, 40.0, &mut r), MaxlabStatus::Ok);
        let mut back = 0.0;
        maxlab_tortoise_from_r(bg, r, &mut back);
        assert!((back - 40.0).abs() < 1e-9);
        assert_eq!(maxlab_tortoise_from_r(bg, 1.5, &mut rs), MaxlabStatus::InvalidArgument);
        assert!(last_error().contains("horizon"), "{}", last_error());
        maxlab_background_free(bg);
    }
}

#[test]
fn invalid_mass_and_null_pointers() {
    unsafe {
        let mut bg = ptr::null_mut();
        assert_eq!(maxlab_background_new(-1.0, &mut bg), MaxlabStatus::InvalidArgument);
        assert!(bg.is_null());
        assert_eq!(maxlab_background_new(1.0, ptr::null_mut()), MaxlabStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert_eq!(maxlab_grid_len(ptr::null()), 0);
        assert!(maxlab_wave_energy(ptr::null()).is_nan());
        maxlab_grid_free(ptr::null_mut());
        maxlab_wave_free(ptr::null_mut());
        maxlab_price_free(ptr::null_mut());
        maxlab_background_free(ptr::null_mut());
    }
}

#[test]
fn evolve_both_formulations() {
    unsafe {
        let mut bg = ptr::null_mut();
        maxlab_background_new(1.0, &mut bg);
        let mut grid = ptr::null_mut();
        assert_eq!(maxlab_grid_new(bg, -100.0, 100.0, 1025, &mut grid), MaxlabStatus::Ok);
        maxlab_background_free(bg);
        let n = maxlab_grid_len(grid);
        assert_eq!(n, 1025);
        let mut rs = vec![0.0; n];
        maxlab_grid_rs(grid, rs.as_mut_ptr(), n);
        assert_eq!((rs[0], rs[n - 1]), (-100.0, 100.0));

        let mut wave = ptr::null_mut();
        let mut price = ptr::null_mut();
        let sym = MaxlabSymmetry::TimeSymmetric;
        assert_eq!(maxlab_wave_new(grid, 1, 0, 0.0, 5.0, 1.0, sym, &mut wave), MaxlabStatus::Ok);
        assert_eq!(maxlab_price_new(grid, 1, 0, 0.0, 5.0, 1.0, sym, &mut price), MaxlabStatus::Ok);
        maxlab_grid_free(grid);
        let e0 = maxlab_wave_energy(wave);
        let dt = 0.5 * (rs[1] - rs[0]);
        assert_eq!(maxlab_wave_step(wave, dt, 200), MaxlabStatus::Ok);
        assert_eq!(maxlab_price_step(price, dt, 200), MaxlabStatus::Ok);
        assert!((maxlab_wave_time(wave) - 200.0 * dt).abs() < 1e-9);
        assert!((maxlab_wave_energy(wave) - e0).abs() / e0 < 1e-3);
        let mut a_wave = vec![0.0; n];
        let mut a_price = vec![0.0; n];
        maxlab_wave_amplitude(wave, a_wave.as_mut_ptr(), ptr::null_mut(), n);
        maxlab_price_fields(price, ptr::null_mut(), a_price.as_mut_ptr(), ptr::null_mut(), n);
        let diff = a_wave.iter().zip(&a_price).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-2, "{diff}");
        assert!(maxlab_price_constraint(price) < 1e-2);
        assert!(maxlab_price_t_energy(price) > 0.0);

        assert_eq!(maxlab_wave_step(wave, 10.0, 1), MaxlabStatus::InvalidArgument);
        assert!(last_error().contains("CFL") || last_error().contains("cfl"), "{}", last_error());
        maxlab_wave_free(wave);
        maxlab_price_free(price);
    }
}

#[test]
fn fit_through_ffi() {
    let x: Vec<f64> = (1..=2000).map(|i| i as f64 * 0.5).collect();
    let y: Vec<f64> = x.iter().map(|t| t.powf(-1.5)).collect();
    let mut fit = MaxlabFit::default();
    let status = unsafe { maxlab_fit_power_law(x.as_ptr(), y.as_ptr(), x.len(), 10.0, 1000.0, &mut fit) };
    assert_eq!(status, MaxlabStatus::Ok);
    assert!((fit.exponent + 1.5).abs() < 1e-3);
    assert!(fit.points >= 8);
    let status = unsafe { maxlab_fit_power_law(x.as_ptr(), y.as_ptr(), 4, 0.5, 2.0, &mut fit) };
    assert_eq!(status, MaxlabStatus::InsufficientData);
}

#[test]
fn run_command_exit_codes() {
    let dir = std::env::temp_dir().join(format!("maxlab-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let zero = dir.join("zero.conf");
    std::fs::write(&zero, "t_final = 0\ndiagnostics.hardy.samples = 10\n").unwrap();
    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "grid.n = 8\n").unwrap();
    let c = |s: &str| CString::new(s).unwrap();
    let out = c(dir.join("out").to_str().unwrap());
    unsafe {
        let verify = c("verify");
        assert_eq!(maxlab_run_command(verify.as_ptr(), c(zero.to_str().unwrap()).as_ptr(), out.as_ptr(), 1), 0);
        assert_eq!(maxlab_run_command(verify.as_ptr(), c(bad.to_str().unwrap()).as_ptr(), out.as_ptr(), 1), 2);
        assert_eq!(maxlab_run_command(c("bogus").as_ptr(), c(zero.to_str().unwrap()).as_ptr(), ptr::null(), 1), -1);
        assert_eq!(maxlab_run_command(verify.as_ptr(), c(zero.to_str().unwrap()).as_ptr(), ptr::null(), 3), -1);
        assert_eq!(maxlab_run_command(ptr::null(), ptr::null(), ptr::null(), 1), -1);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(maxlab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
