use ltfrechet::inference::{self, fit, log_likelihood, score_check, CureModel, LongTermFrechet, Prepared};
use ltfrechet::montecarlo::{calibrate_censoring, generate_replicate};
use ltfrechet::numerics::{fd_hessian, minimize, DEFAULT_FD_STEP};
use ltfrechet::{kersey1987, CensoredSample, LfParams, OptimizerConfig};

fn lf(lambda: f64, alpha: f64, p: f64) -> LfParams {
    LfParams::new(lambda, alpha, p).unwrap()
}

fn synthetic(truth: &LfParams, censoring: f64, n: usize, seed: u64) -> CensoredSample {
    let tau = calibrate_censoring(truth, censoring).unwrap();
    generate_replicate(truth, n, tau, seed).unwrap()
}

// Maximum of the log-likelihood on the embedded data, confirmed independently
// with scipy's Nelder–Mead (xatol 1e-10) on the same closed form.
const LEUKEMIA_MLE: [f64; 3] = [0.362_818_4, 0.608_427_4, 0.053_873_3];
const LEUKEMIA_MAX_LOGLIK: f64 = -47.370_900_08;

#[test]
fn leukemia_maximum_likelihood() {
    let data = kersey1987();
    let r = fit(&data, &OptimizerConfig::default(), 0.95).unwrap();
    assert!(r.converged);
    for (got, want) in r.theta.iter().zip(LEUKEMIA_MLE) {
        assert!((got - want).abs() < 1e-5, "{:?}", r.theta);
    }
    assert!((r.loglik - LEUKEMIA_MAX_LOGLIK).abs() < 1e-7);
    assert_eq!((r.n_events, r.n_censored), (34, 12));
    assert!(r.observed_info.unwrap().is_positive_definite());
    let ci = r.intervals.unwrap();
    for (i, c) in ci.iter().enumerate() {
        assert!(c.lower <= r.theta[i] && r.theta[i] <= c.upper);
        assert!(c.lower >= 0.0);
    }
    assert!(ci[2].upper <= 1.0);
    // The p interval reaches below zero before clamping.
    assert_eq!(ci[2].lower, 0.0);
}

#[test]
fn loglik_at_published_point() {
    // scipy on the closed form at (0.31358, 0.65682, 0.12476)
    let ll = log_likelihood(&lf(0.31358, 0.65682, 0.12476), &kersey1987()).unwrap();
    assert!((ll - (-47.508_985_713_308_98)).abs() < 1e-9, "{ll}");
}

#[test]
fn score_vanishes_at_the_optimum() {
    let data = kersey1987();
    let r = fit(&data, &OptimizerConfig::default(), 0.95).unwrap();
    let g = score_check(&r, &data).unwrap();
    assert!(g.iter().all(|v| v.abs() < 1e-4), "{g:?}");
}

#[test]
fn score_detects_perturbed_estimate() {
    let data = kersey1987();
    let mut r = fit(&data, &OptimizerConfig::default(), 0.95).unwrap();
    r.theta[0] *= 1.1;
    let g = score_check(&r, &data).unwrap();
    assert!(g.iter().any(|v| v.abs() > 1e-2), "{g:?}");
}

#[test]
fn hessian_matches_richardson_extrapolation() {
    let data = kersey1987();
    let prepared = Prepared::new(&data);
    let theta = [0.31358, 0.65682, 0.12476];
    let negll = |x: &[f64; 3]| -LongTermFrechet::log_likelihood(x, &prepared);

    // Independent second differences at step h and h/2, combined as (4 D(h/2) - D(h)) / 3.
    let second = |i: usize, j: usize, h: f64| {
        let at = |di: f64, dj: f64| {
            let mut x = theta;
            x[i] += di;
            x[j] += dj;
            negll(&x)
        };
        if i == j {
            let mut xp = theta;
            let mut xm = theta;
            xp[i] += h;
            xm[i] -= h;
            (negll(&xp) - 2.0 * negll(&theta) + negll(&xm)) / (h * h)
        } else {
            (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
        }
    };
    let h = 1e-3;
    let got = fd_hessian(negll, &theta, DEFAULT_FD_STEP).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let oracle = (4.0 * second(i, j, h / 2.0) - second(i, j, h)) / 3.0;
            let rel = ((got.get(i, j) - oracle) / oracle).abs();
            assert!(rel < 1e-3, "H[{i}][{j}] = {} vs {oracle}", got.get(i, j));
        }
    }
}

#[test]
fn synthetic_fit_covers_truth() {
    let truth = lf(4.0, 2.0, 0.3);
    let data = synthetic(&truth, 0.35, 300, 2718);
    let r = fit(&data, &OptimizerConfig::default(), 0.95).unwrap();
    let se = r.std_errors.unwrap();
    let want = [4.0, 2.0, 0.3];
    for i in 0..3 {
        assert!((r.theta[i] - want[i]).abs() < 3.0 * se[i], "{:?} ± {se:?}", r.theta);
    }
    let g = score_check(&r, &data).unwrap();
    assert!(g.iter().all(|v| v.abs() < 1e-4), "{g:?}");
}

#[test]
fn minimizer_beats_truth_on_synthetic_sample() {
    let truth = lf(2.0, 0.5, 0.3);
    let data = synthetic(&truth, 0.457, 200, 31);
    let prepared = Prepared::new(&data);
    let objective = |u: &[f64; 3]| -LongTermFrechet::log_likelihood(&inference::from_unconstrained(u), &prepared);
    let x0 = inference::to_unconstrained(&inference::initial_guess::<LongTermFrechet>(&data));
    let m = minimize(objective, x0, &OptimizerConfig::default()).unwrap();
    let at_truth = objective(&inference::to_unconstrained(&[2.0, 0.5, 0.3]));
    assert!(m.value <= at_truth);
    assert!(m.value <= objective(&x0));
}

#[test]
fn optimum_not_beaten_by_grid_search() {
    for (data, label) in [
        (kersey1987(), "kersey"),
        (synthetic(&lf(4.0, 2.0, 0.3), 0.535, 60, 5), "synthetic"),
    ] {
        let r = fit(&data, &OptimizerConfig::default(), 0.95).unwrap();
        let prepared = Prepared::new(&data);
        let mut best_grid = f64::NEG_INFINITY;
        for i in 0..40 {
            let lambda = r.theta[0] * (0.25 + 3.0 * i as f64 / 39.0);
            for j in 0..40 {
                let alpha = r.theta[1] * (0.25 + 3.0 * j as f64 / 39.0);
                for k in 1..40 {
                    let p = k as f64 / 40.0;
                    let v = LongTermFrechet::log_likelihood(&[lambda, alpha, p], &prepared);
                    if v.is_finite() {
                        best_grid = best_grid.max(v);
                    }
                }
            }
        }
        assert!(best_grid <= r.loglik + 1e-6, "{label}: grid {best_grid} vs {}", r.loglik);
    }
}

#[test]
fn standard_errors_shrink_with_more_data() {
    let truth = lf(4.0, 2.0, 0.3);
    let tau = calibrate_censoring(&truth, 0.35).unwrap();
    let config = OptimizerConfig::default();
    let mut shrinking = 0;
    for trial in 0..100 {
        let big = generate_replicate(&truth, 200, tau, 10_000 + trial).unwrap();
        let small = CensoredSample::new(big.times()[..100].to_vec(), big.events()[..100].to_vec()).unwrap();
        let se_small = fit(&small, &config, 0.95).ok().and_then(|r| r.std_errors);
        let se_big = fit(&big, &config, 0.95).ok().and_then(|r| r.std_errors);
        if let (Some(a), Some(b)) = (se_small, se_big) {
            if (0..3).all(|i| b[i] < a[i]) {
                shrinking += 1;
            }
        }
    }
    assert!(shrinking >= 95, "only {shrinking} of 100 trials");
}

#[test]
fn annealing_prelude_reaches_same_optimum() {
    let data = kersey1987();
    let plain = fit(&data, &OptimizerConfig::default(), 0.95).unwrap();
    let config = OptimizerConfig {
        annealing_enabled: true,
        restarts: 1,
        ..OptimizerConfig::default()
    };
    let annealed = fit(&data, &config, 0.95).unwrap();
    assert!((annealed.loglik - plain.loglik).abs() < 1e-8);
    assert_eq!(annealed, fit(&data, &config, 0.95).unwrap());
}

#[test]
fn wider_level_gives_wider_intervals() {
    let data = kersey1987();
    let r90 = fit(&data, &OptimizerConfig::default(), 0.90).unwrap();
    let r99 = fit(&data, &OptimizerConfig::default(), 0.99).unwrap();
    let (a, b) = (r90.intervals.unwrap(), r99.intervals.unwrap());
    for i in 0..2 {
        assert!(b[i].upper - b[i].lower > a[i].upper - a[i].lower);
    }
}
