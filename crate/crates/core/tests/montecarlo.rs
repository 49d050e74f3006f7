use ltfrechet::distribution::Draw;
use ltfrechet::montecarlo::{
    calibrate_censoring, generate_replicate, run_scenario, run_scenario_with, Execution, Scenario,
};
use ltfrechet::LfParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lf(lambda: f64, alpha: f64, p: f64) -> LfParams {
    LfParams::new(lambda, alpha, p).unwrap()
}

/// Censored fraction among `n` simulated individuals, drawn without the
/// library's replicate generator.
fn simulated_censoring(truth: &LfParams, tau: f64, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let censored = (0..n)
        .filter(|_| {
            let c = tau * rng.random::<f64>();
            match truth.draw(&mut rng) {
                Draw::Cured => true,
                Draw::Failure(t) => t > c,
            }
        })
        .count();
    censored as f64 / n as f64
}

#[test]
fn calibration_verified_by_simulation() {
    for (truth, target) in [(lf(4.0, 2.0, 0.3), 0.35), (lf(2.0, 0.5, 0.3), 0.457)] {
        let tau = calibrate_censoring(&truth, target).unwrap();
        let realized = simulated_censoring(&truth, tau, 1_000_000, 12);
        assert!((realized - target).abs() < 0.002, "{target}: {realized}");
    }
}

#[test]
fn replicate_censoring_concentrates() {
    let truth = lf(4.0, 2.0, 0.3);
    let tau = calibrate_censoring(&truth, 0.35).unwrap();
    let s = generate_replicate(&truth, 100_000, tau, 8).unwrap();
    assert!((s.censored_fraction() - 0.35).abs() < 0.005);
}

#[test]
fn low_censoring_row_n100() {
    let mut s = Scenario::new(lf(4.0, 2.0, 0.3), 0.35, vec![100]);
    s.base_seed = 11;
    let r = &run_scenario(&s).unwrap()[0];
    assert!(r.replications_used >= 1_990);
    assert!((r.alpha.mre - 1.023).abs() < 0.03, "{r:?}");
    assert!((r.lambda.mre - 1.005).abs() < 0.03, "{r:?}");
    assert!((r.p.mre - 1.000).abs() < 0.02, "{r:?}");
    assert!((r.alpha.coverage - 0.950).abs() < 0.02, "{r:?}");
    assert!((r.realized_censoring - 0.349).abs() < 0.01, "{r:?}");
}

#[test]
fn high_censoring_small_sample_bias_direction() {
    let mut s = Scenario::new(lf(2.0, 0.5, 0.5), 0.612, vec![25]);
    s.base_seed = 12;
    let r = &run_scenario(&s).unwrap()[0];
    assert!(r.alpha.mre > 1.15, "{r:?}");
    assert!(r.lambda.mse > 2.0, "{r:?}");
}

#[test]
fn identical_seed_identical_reports() {
    let mut s = Scenario::new(lf(2.0, 0.5, 0.3), 0.457, vec![25, 60]);
    s.replications = 150;
    s.base_seed = 77;
    let a = run_scenario(&s).unwrap();
    assert_eq!(a, run_scenario(&s).unwrap());
    assert_eq!(a, run_scenario_with(&s, Execution::Serial).unwrap());
    s.base_seed = 78;
    assert_ne!(a, run_scenario(&s).unwrap());
}
