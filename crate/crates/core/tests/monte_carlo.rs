use mudr_core::mcsim::{
    crb_experiment, crb_trials, gamma_experiment, residual_experiment, residual_trials, WaveformSpec,
};
use mudr_core::scenario::{range_from_delay, Scenario};
use mudr_core::LinkBudget64;

fn at_isnr(isnr: f64) -> LinkBudget64 {
    let mut s = Scenario::<f64>::table2();
    let base = s.link_budget().unwrap().integrated_snr(0).unwrap();
    s.radar_power_w *= isnr / base;
    s.link_budget().unwrap()
}

fn with_spread(spread: f64) -> LinkBudget64 {
    let mut s = Scenario::<f64>::table2();
    s.set_field("target_range_m", 1_000.0).unwrap();
    s.set_field("process_range_std_m", range_from_delay(spread / s.bandwidth_hz))
        .unwrap();
    s.link_budget().unwrap()
}

fn spec() -> WaveformSpec {
    WaveformSpec {
        n_samples: 1024,
        ..WaveformSpec::default()
    }
}

#[test]
fn reports_independent_of_thread_count() {
    let lb = at_isnr(300.0);
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| crb_experiment(&lb, &spec(), 500, 11).unwrap());
    let parallel = crb_experiment(&lb, &spec(), 500, 11).unwrap();
    assert_eq!(serial, parallel);
    assert_eq!(
        serde_json::to_string(&serial).unwrap(),
        serde_json::to_string(&parallel).unwrap()
    );

    let lb = with_spread(0.05);
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| residual_experiment(&lb, &spec(), 500, 11).unwrap());
    assert_eq!(serial, residual_experiment(&lb, &spec(), 500, 11).unwrap());
}

#[test]
fn seeds_change_results() {
    let lb = at_isnr(300.0);
    let a = crb_experiment(&lb, &spec(), 300, 1).unwrap();
    let b = crb_experiment(&lb, &spec(), 300, 2).unwrap();
    assert_ne!(a.empirical, b.empirical);
}

#[test]
fn crb_not_beaten() {
    for (isnr, seed) in [(100.0, 3), (1_000.0, 4), (10_000.0, 5)] {
        let stats = crb_trials(&at_isnr(isnr), &spec(), 4_000, seed).unwrap();
        let floor = stats.analytic - 3.0 * stats.errors.variance_std_error;
        assert!(
            stats.errors.variance >= floor,
            "isnr {isnr}: {} < {floor}",
            stats.errors.variance
        );
        assert_eq!(stats.degenerate, 0);
    }
}

#[test]
fn crb_errors_unbiased() {
    let stats = crb_trials(&at_isnr(1_000.0), &spec(), 4_000, 8).unwrap();
    assert!(stats.errors.mean.abs() < 4.0 * stats.errors.mean_std_error, "{stats:?}");
}

#[test]
fn residual_error_shrinks_with_spread() {
    let mut previous: Option<(f64, f64)> = None;
    for spread in [0.1, 0.03, 0.01] {
        let stats = residual_trials(&with_spread(spread), &spec(), 4_000, 21).unwrap();
        let (err, se) = (stats.rel_error(), stats.rel_std_error());
        if let Some((prev_err, prev_se)) = previous {
            assert!(err <= prev_err + 2.0 * (se + prev_se), "spread {spread}: {err} > {prev_err}");
        }
        previous = Some((err, se));
    }
}

#[test]
fn residual_pass_at_small_spread() {
    let r = residual_experiment(&with_spread(0.05), &spec(), 2_000, 6).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn gamma_within_tolerance() {
    let r = gamma_experiment(&WaveformSpec::default(), 50, 2).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.analytic, (2.0 * std::f64::consts::PI).powi(2) / 12.0);
}
