use maxlab::analysis::{local_decay_ratio, order_from_errors};
use maxlab::background::{Background, RadialGrid};
use maxlab::energetics::{
    conformal_wave_rate, local_decay_rate, mode_k_energy, mode_t_energy, trapping_rate, wave_conformal_energy,
    wave_energy, Multiplier, MultiplierConfig,
};
use maxlab::solver::run::{evolve_run, EvolveSpec, ModeConfig, RunSeries};
use maxlab::solver::{init_price_from_wave, init_wave, HarmonicWaveState, InitialDataSpec, PriceState, TimeSymmetry};
use maxlab::spectral::HarmonicIndex;

fn grid(lo: f64, hi: f64, n: usize) -> RadialGrid {
    RadialGrid::new(Background::new(1.0).unwrap(), lo, hi, n).unwrap()
}

fn run(grid: RadialGrid, l: u32, init: InitialDataSpec, t_final: f64, multiplier: Option<MultiplierConfig>) -> RunSeries {
    evolve_run(&EvolveSpec {
        grid,
        modes: vec![ModeConfig { index: HarmonicIndex::new(l, 0).unwrap(), init }],
        cfl: 0.5,
        t_final,
        cadence: 1.0,
        probes: vec![],
        rays: vec![],
        surface: (2.5, 4.0),
        multiplier,
        keep_snapshots: false,
        threads: Some(1),
    })
    .unwrap()
}

#[test]
fn zero_states_have_zero_energies() {
    let g = grid(-100.0, 100.0, 257);
    let mode = HarmonicIndex::new(3, 2).unwrap();
    let mut wave = HarmonicWaveState::zeros(mode, g.len());
    let mut price = PriceState::zeros(mode, g.len());
    wave.t = 7.0;
    price.t = 7.0;
    assert_eq!(wave_energy(&wave, &g), 0.0);
    assert_eq!(wave_conformal_energy(&wave, &g).value, 0.0);
    assert_eq!(mode_t_energy(&price, &g), 0.0);
    assert_eq!(mode_k_energy(&price, &g).value, 0.0);
    assert_eq!(trapping_rate(&price, &g), 0.0);
    assert_eq!(conformal_wave_rate(&wave, &g), 0.0);
    assert_eq!(local_decay_rate(&wave, &g), 0.0);
    let m = Multiplier::new(&g, MultiplierConfig::default()).unwrap();
    let s = m.sample(&wave, &g);
    assert_eq!(s.e_gamma, 0.0);
    assert!(s.groups.iter().all(|&x| x == 0.0));
}

#[test]
fn wave_and_maxwell_energies_are_related_by_the_casimir() {
    let g = grid(-150.0, 150.0, 8193);
    for l in 1..=4 {
        for sym in [TimeSymmetry::TimeSymmetric, TimeSymmetry::Ingoing, TimeSymmetry::Outgoing] {
            let mode = HarmonicIndex::new(l, 0).unwrap();
            let mut wave = init_wave(&InitialDataSpec::gaussian(-5.0, 6.0, 1.0, sym), &g, mode).unwrap();
            let mut price = init_price_from_wave(&wave, &g).unwrap();
            for t in [0.0, 30.0] {
                wave.t = t;
                price.t = t;
                let ll = f64::from(l * (l + 1));
                let (e, et) = (wave_energy(&wave, &g), mode_t_energy(&price, &g));
                assert!((e - ll * et).abs() <= 1e-4 * e, "l={l} t={t}: E {e} vs l(l+1)E^T {}", ll * et);
                let (ec, ek) = (wave_conformal_energy(&wave, &g).value, mode_k_energy(&price, &g).value);
                let rhs = 0.5 * ll * ek + e;
                assert!((ec - rhs).abs() <= 1e-4 * ec, "l={l} t={t}: E_C {ec} vs {rhs}");
            }
        }
    }
}

#[test]
fn static_charge_raises_the_boundary_growth_flag() {
    let g = grid(-100.0, 100.0, 513);
    let mode = HarmonicIndex::new(0, 0).unwrap();
    let wave = init_wave(&InitialDataSpec::static_charge(1.0, 0.0), &g, mode).unwrap();
    let price = init_price_from_wave(&wave, &g).unwrap();
    assert!(mode_k_energy(&price, &g).boundary_growth);

    let mode = HarmonicIndex::new(1, 0).unwrap();
    let wave = init_wave(&InitialDataSpec::gaussian(0.0, 5.0, 1.0, TimeSymmetry::TimeSymmetric), &g, mode).unwrap();
    let price = init_price_from_wave(&wave, &g).unwrap();
    assert!(!mode_k_energy(&price, &g).boundary_growth);
    assert!(!wave_conformal_energy(&wave, &g).boundary_growth);
}

#[test]
fn far_data_does_not_feel_the_trapping_region_early() {
    // Before the pulse reaches the trapping region both sides of the K-energy law are
    // negligible; the change of E^K is discretization error and shrinks at second order.
    let changes: Vec<f64> = [4001, 8001]
        .iter()
        .map(|&n| {
            let series = run(
                grid(-100.0, 300.0, n),
                1,
                InitialDataSpec::gaussian(150.0, 5.0, 1.0, TimeSymmetry::TimeSymmetric),
                20.0,
                None,
            );
            let rows = &series.modes[0].rows;
            let (first, last) = (rows[0], rows[rows.len() - 1]);
            let dtrap = (last.trap_cum - first.trap_cum).abs() / first.e_k;
            assert!(dtrap < 1e-5, "relative trapping integral {dtrap}");
            (last.e_k - first.e_k).abs() / first.e_k
        })
        .collect();
    assert!(changes[0] < 5e-3 && changes[1] < 1e-3, "relative change of E^K {changes:?}");
    let order = order_from_errors(changes[0], changes[1]);
    assert!((order - 2.0).abs() < 0.3, "order {order}");
}

#[test]
fn local_decay_integral_is_monotone() {
    let series = run(
        grid(-200.0, 200.0, 2049),
        2,
        InitialDataSpec::gaussian(0.0, 3.0, 1.0, TimeSymmetry::TimeSymmetric),
        100.0,
        None,
    );
    let ratio = local_decay_ratio(&series);
    assert!(ratio.len() > 50);
    assert_eq!(ratio[0].1, 0.0);
    assert!(ratio.windows(2).all(|w| w[1].1 >= w[0].1 && w[1].0 > w[0].0));
    assert!(ratio.last().unwrap().1 > 0.0);
}

#[test]
fn multiplier_leading_group_is_nonnegative() {
    let series = run(
        grid(-200.0, 200.0, 2049),
        1,
        InitialDataSpec::gaussian(0.0, 5.0, 1.0, TimeSymmetry::Ingoing),
        80.0,
        Some(MultiplierConfig::default()),
    );
    let rows = &series.modes[0].rows;
    assert!(rows.iter().any(|r| r.morawetz.started));
    assert!(!rows.iter().any(|r| r.t < 10.0 - 1e-9 && r.morawetz.started));
    let last = rows.last().unwrap().morawetz;
    assert_eq!(last.leading_min_density, 0.0);
    assert!(last.groups[0] >= 0.0);
}

#[test]
fn quadrature_is_exact_to_second_order() {
    // Trapezoid part alone: analytic density of a Gaussian.
    let w = 4.0;
    let g = grid(-100.0, 100.0, 4001);
    let density = g.rs().iter().map(|&x| (-2.0 * (x / w).powi(2)).exp());
    let exact = w * (std::f64::consts::PI / 2.0).sqrt();
    assert!((g.integrate(density) - exact).abs() < 1e-12 * exact);

    // With the discrete derivative the energy converges at second order to the analytic value.
    let mode = HarmonicIndex::new(2, 0).unwrap();
    let spec = InitialDataSpec::gaussian(0.0, w, 1.0, TimeSymmetry::TimeSymmetric);
    let reference = {
        let fine = grid(-100.0, 100.0, 64001);
        let v = fine.potential(2);
        let e = fine.rs().iter().zip(v.iter()).map(|(&x, &v)| {
            let a = (-(x / w).powi(2)).exp();
            let da = -2.0 * x / (w * w) * a;
            da * da + v * a * a
        });
        0.5 * fine.integrate(e)
    };
    let errors: Vec<f64> = [1001, 2001]
        .iter()
        .map(|&n| {
            let g = grid(-100.0, 100.0, n);
            (wave_energy(&init_wave(&spec, &g, mode).unwrap(), &g) - reference).abs()
        })
        .collect();
    let order = order_from_errors(errors[0], errors[1]);
    assert!((order - 2.0).abs() < 0.2, "order {order}, errors {errors:?}");
}
