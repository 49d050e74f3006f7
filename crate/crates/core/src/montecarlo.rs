//! Simulation harness for estimator quality: mean relative error, mean
//! squared error, Wald-interval coverage and realized censoring.
//!
//! Censoring times are `Uniform(0, τ)`, independent of failure times, with
//! `τ` calibrated so the expected censored proportion (cured individuals
//! included) hits a target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::CensoredSample;
use crate::distribution::{Draw, LfParams};
use crate::error::{domain, Error, Result};
use crate::inference::{fit, ConfidenceInterval};
use crate::numerics::{integrate, OptimizerConfig};

/// Tolerance on the calibrated censoring probability.
pub const CALIBRATION_TOLERANCE: f64 = 1e-3;
/// Calibrated τ below `MIN_TAU_RATIO * λ` is treated as degenerate.
pub const MIN_TAU_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub truth: LfParams,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub target_censoring: f64,
    pub ci_level: f64,
    pub base_seed: u64,
    pub optimizer: OptimizerConfig,
}

impl Scenario {
    pub fn new(truth: LfParams, target_censoring: f64, sample_sizes: Vec<usize>) -> Self {
        Self {
            truth,
            sample_sizes,
            replications: 2_000,
            target_censoring,
            ci_level: 0.95,
            base_seed: 0,
            optimizer: OptimizerConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return domain("sample sizes must be a nonempty list of positive integers");
        }
        if self.replications == 0 {
            return domain("replications must be at least 1");
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return domain(format!("ci_level must lie in (0, 1), got {}", self.ci_level));
        }
        if !self.truth.is_interior() {
            return domain("the true cure fraction must lie in (0, 1)");
        }
        if !(self.target_censoring >= self.truth.p() && self.target_censoring < 1.0) {
            return Err(Error::CalibrationInfeasible {
                target: self.target_censoring,
                cure_fraction: self.truth.p(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub mre: f64,
    pub mse: f64,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub n: usize,
    pub alpha: ParamSummary,
    pub lambda: ParamSummary,
    pub p: ParamSummary,
    /// Mean censored fraction over all generated replicates.
    pub realized_censoring: f64,
    /// Replicates with a converged fit and valid standard errors.
    pub replications_used: usize,
    pub replications_requested: usize,
}

impl SimReport {
    /// Per-parameter summaries in reporting order: alpha, lambda, p.
    pub fn rows(&self) -> [(&'static str, &ParamSummary); 3] {
        [("alpha", &self.alpha), ("lambda", &self.lambda), ("p", &self.p)]
    }
}

/// Expected censored proportion under `Uniform(0, τ)` censoring:
/// `p + (1 - p) (1/τ) ∫₀^τ S₀(c) dc`.
pub fn censoring_probability(truth: &LfParams, tau: f64) -> f64 {
    let (lambda, alpha) = (truth.lambda(), truth.alpha());
    // ∫₀¹ F₀(τ v) dv with F₀(c) = exp(-(c/λ)^-α)
    let f0 = |v: f64| {
        if v <= 0.0 {
            0.0
        } else {
            (-(-alpha * ((tau * v).ln() - lambda.ln())).exp()).exp()
        }
    };
    let mean_f0 = integrate(f0, 0.0, 1.0, 1e-12).clamp(0.0, 1.0);
    truth.p() + (1.0 - truth.p()) * (1.0 - mean_f0)
}

/// Upper bound `τ` of the uniform censoring law giving `target` expected censoring.
pub fn calibrate_censoring(truth: &LfParams, target: f64) -> Result<f64> {
    let infeasible = || Error::CalibrationInfeasible {
        target,
        cure_fraction: truth.p(),
    };
    if !(target > truth.p() + CALIBRATION_TOLERANCE && target < 1.0 - CALIBRATION_TOLERANCE) {
        return Err(infeasible());
    }
    let lambda = truth.lambda();
    let mut lo = (MIN_TAU_RATIO * lambda).ln();
    if censoring_probability(truth, lo.exp()) < target {
        return Err(infeasible());
    }
    let mut hi = lambda.ln();
    while censoring_probability(truth, hi.exp()) > target {
        hi += 2.0;
        if hi > lambda.ln() + 80.0 {
            return Err(infeasible());
        }
    }
    // Censoring probability decreases in τ.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if censoring_probability(truth, mid.exp()) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let tau = (0.5 * (lo + hi)).exp();
    if tau < MIN_TAU_RATIO * lambda
        || (censoring_probability(truth, tau) - target).abs() > CALIBRATION_TOLERANCE
    {
        return Err(infeasible());
    }
    Ok(tau)
}

/// One censored sample: latent LF failure times against independent
/// `Uniform(0, τ)` censoring. Cured individuals are always censored.
pub fn generate_replicate(truth: &LfParams, n: usize, tau: f64, seed: u64) -> Result<CensoredSample> {
    if n == 0 {
        return domain("replicate size must be at least 1");
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return domain(format!("tau must be finite and positive, got {tau}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut times = Vec::with_capacity(n);
    let mut events = Vec::with_capacity(n);
    for _ in 0..n {
        let latent = truth.draw(&mut rng);
        let c = tau * rng.sample::<f64, _>(rand::distr::Open01);
        match latent {
            Draw::Failure(t) if t <= c => {
                times.push(t);
                events.push(true);
            }
            Draw::Failure(_) | Draw::Cured => {
                times.push(c);
                events.push(false);
            }
        }
    }
    CensoredSample::new(times, events)
}

/// Order-independent seed for replicate `index` at sample size `n`.
pub fn replicate_seed(base_seed: u64, n: usize, index: usize) -> u64 {
    let mut h = splitmix(base_seed);
    h = splitmix(h ^ n as u64);
    splitmix(h ^ index as u64)
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

struct Outcome {
    censored_fraction: f64,
    estimate: Option<([f64; 3], [ConfidenceInterval; 3])>,
}

fn run_replicate(s: &Scenario, n: usize, tau: f64, index: usize) -> Outcome {
    let seed = replicate_seed(s.base_seed, n, index);
    let sample = generate_replicate(&s.truth, n, tau, seed).expect("validated inputs");
    let estimate = fit(&sample, &s.optimizer, s.ci_level)
        .ok()
        .filter(|r| r.converged)
        .and_then(|r| r.intervals.map(|ci| (r.theta, ci)));
    Outcome {
        censored_fraction: sample.censored_fraction(),
        estimate,
    }
}

fn summarize(s: &Scenario, n: usize, outcomes: &[Outcome]) -> SimReport {
    // Natural coordinate order is (lambda, alpha, p).
    let truth = [s.truth.lambda(), s.truth.alpha(), s.truth.p()];
    let mut ratio = [0.0; 3];
    let mut sq = [0.0; 3];
    let mut covered = [0usize; 3];
    let mut used = 0usize;
    let mut censored = 0.0;
    for o in outcomes {
        censored += o.censored_fraction;
        if let Some((theta, ci)) = &o.estimate {
            used += 1;
            for i in 0..3 {
                ratio[i] += theta[i] / truth[i];
                sq[i] += (theta[i] - truth[i]).powi(2);
                covered[i] += usize::from(ci[i].contains(truth[i]));
            }
        }
    }
    let m = used as f64;
    let summary = |i: usize| ParamSummary {
        mre: ratio[i] / m,
        mse: sq[i] / m,
        coverage: covered[i] as f64 / m,
    };
    SimReport {
        n,
        alpha: summary(1),
        lambda: summary(0),
        p: summary(2),
        realized_censoring: censored / outcomes.len() as f64,
        replications_used: used,
        replications_requested: outcomes.len(),
    }
}

/// Runs every sample size of the scenario in parallel.
pub fn run_scenario(s: &Scenario) -> Result<Vec<SimReport>> {
    run_scenario_with(s, Execution::Parallel)
}

/// Output is identical for both execution modes: replicate seeds are fixed in
/// advance and accumulation happens in replicate order.
pub fn run_scenario_with(s: &Scenario, execution: Execution) -> Result<Vec<SimReport>> {
    s.validate()?;
    let tau = calibrate_censoring(&s.truth, s.target_censoring)?;
    let reports = s
        .sample_sizes
        .iter()
        .map(|&n| {
            let outcomes: Vec<Outcome> = match execution {
                Execution::Serial => (0..s.replications)
                    .map(|j| run_replicate(s, n, tau, j))
                    .collect(),
                Execution::Parallel => (0..s.replications)
                    .into_par_iter()
                    .map(|j| run_replicate(s, n, tau, j))
                    .collect(),
            };
            summarize(s, n, &outcomes)
        })
        .collect();
    Ok(reports)
}
