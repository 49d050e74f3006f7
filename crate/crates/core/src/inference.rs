//! Censored-data maximum likelihood for long-term (cure-rate) models.
//!
//! Optimization runs over the unconstrained coordinates
//! `(ln scale, ln shape, logit p)`; the observed information is computed in
//! the natural coordinates `(scale, shape, p)`.

use serde::{Deserialize, Serialize};

use crate::data::CensoredSample;
use crate::distribution::LfParams;
use crate::error::{domain, Error, Result};
use crate::model_eval::kaplan_meier;
use crate::numerics::{
    fd_gradient, fd_hessian, minimize, normal_quantile, OptimizerConfig, SymMatrix3,
    DEFAULT_FD_STEP,
};

/// Cure fractions outside `(P_FLOOR, 1 - P_FLOOR)` are rejected during optimization.
pub const P_FLOOR: f64 = 1e-6;

/// Observations preprocessed for repeated likelihood evaluation.
#[derive(Debug, Clone)]
pub struct Prepared {
    event_log_times: Vec<f64>,
    censored_log_times: Vec<f64>,
    sum_event_log_t: f64,
}

impl Prepared {
    pub fn new(data: &CensoredSample) -> Self {
        let mut event_log_times = Vec::with_capacity(data.n_events());
        let mut censored_log_times = Vec::with_capacity(data.n_censored());
        for (t, event) in data.iter() {
            if event {
                event_log_times.push(t.ln());
            } else {
                censored_log_times.push(t.ln());
            }
        }
        let sum_event_log_t = event_log_times.iter().sum();
        Self {
            event_log_times,
            censored_log_times,
            sum_event_log_t,
        }
    }

    pub fn n_events(&self) -> usize {
        self.event_log_times.len()
    }

    pub fn event_log_times(&self) -> &[f64] {
        &self.event_log_times
    }

    pub fn censored_log_times(&self) -> &[f64] {
        &self.censored_log_times
    }
}

/// A two-parameter baseline mixed with a cure fraction `p` stored last.
///
/// Coordinates are `[scale, shape, p]` in natural units.
pub trait CureModel {
    type Params: Copy + std::fmt::Debug;

    /// Display names of the three coordinates, in order.
    const NAMES: [&'static str; 3];

    fn from_natural(theta: [f64; 3]) -> Result<Self::Params>;

    fn to_natural(params: &Self::Params) -> [f64; 3];

    /// Log-likelihood at natural coordinates; may be non-finite for invalid input.
    fn log_likelihood(theta: &[f64; 3], data: &Prepared) -> f64;

    /// Scale and shape from a linearized fit of plotting positions `(ln t, S0(t))`
    /// where `S0` is the estimated survival of susceptibles.
    fn linearized_start(points: &[(f64, f64)]) -> Option<(f64, f64)>;
}

/// The long-term Fréchet model.
#[derive(Debug, Clone, Copy)]
pub struct LongTermFrechet;

impl CureModel for LongTermFrechet {
    type Params = LfParams;
    const NAMES: [&'static str; 3] = ["lambda", "alpha", "p"];

    fn from_natural(theta: [f64; 3]) -> Result<LfParams> {
        LfParams::new(theta[0], theta[1], theta[2])
    }

    fn to_natural(params: &LfParams) -> [f64; 3] {
        [params.lambda(), params.alpha(), params.p()]
    }

    fn log_likelihood(theta: &[f64; 3], data: &Prepared) -> f64 {
        let [lambda, alpha, p] = *theta;
        if !(lambda > 0.0 && alpha > 0.0 && p > 0.0 && p < 1.0) {
            return f64::NAN;
        }
        let d = data.n_events() as f64;
        let log_lambda = lambda.ln();
        // (λ/t)^α for each failure
        let event_tail: f64 = data
            .event_log_times
            .iter()
            .map(|lt| (alpha * (log_lambda - lt)).exp())
            .sum();
        let censored: f64 = data
            .censored_log_times
            .iter()
            .map(|lt| {
                let z = (alpha * (log_lambda - lt)).exp();
                (p - (1.0 - p) * (-z).exp_m1()).ln()
            })
            .sum();
        d * alpha.ln() + d * (-p).ln_1p() + d * alpha * log_lambda
            - (alpha + 1.0) * data.sum_event_log_t
            - event_tail
            + censored
    }

    fn linearized_start(points: &[(f64, f64)]) -> Option<(f64, f64)> {
        // F0 = exp(-(t/λ)^-α)  =>  ln(-ln F0) = -α ln t + α ln λ
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter(|(_, s0)| *s0 > 0.0 && *s0 < 1.0)
            .map(|&(lt, s0)| (lt, (-(1.0 - s0).ln()).ln()))
            .collect();
        let (slope, intercept) = least_squares(&pts)?;
        let alpha = -slope;
        (alpha > 0.0).then(|| ((intercept / alpha).exp(), alpha))
    }
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    (slope.is_finite() && intercept.is_finite()).then_some((slope, intercept))
}

/// Symmetric Wald interval clamped to the parameter domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<P> {
    pub estimates: P,
    /// `[scale, shape, p]` in natural units.
    pub theta: [f64; 3],
    pub loglik: f64,
    /// Negative Hessian of the log-likelihood at the estimate, when computable.
    pub observed_info: Option<SymMatrix3>,
    /// Absent when the observed information is not positive definite.
    pub std_errors: Option<[f64; 3]>,
    pub intervals: Option<[ConfidenceInterval; 3]>,
    pub level: f64,
    pub converged: bool,
    pub n_events: usize,
    pub n_censored: usize,
    /// Optimizer coordinates `(ln scale, ln shape, logit p)` of the estimate.
    pub unconstrained: [f64; 3],
}

impl<P> FitResult<P> {
    pub fn n(&self) -> usize {
        self.n_events + self.n_censored
    }

    pub fn neg_loglik(&self) -> f64 {
        -self.loglik
    }
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn expit(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub fn to_unconstrained(theta: &[f64; 3]) -> [f64; 3] {
    [theta[0].ln(), theta[1].ln(), logit(theta[2])]
}

pub fn from_unconstrained(u: &[f64; 3]) -> [f64; 3] {
    [u[0].exp(), u[1].exp(), expit(u[2])]
}

/// Objective over unconstrained coordinates; `NaN` marks rejected points.
fn unconstrained_objective<M: CureModel>(u: &[f64; 3], data: &Prepared) -> f64 {
    let theta = from_unconstrained(u);
    if !(theta[2] > P_FLOOR && theta[2] < 1.0 - P_FLOOR) || !theta[0].is_finite() {
        return f64::NAN;
    }
    -M::log_likelihood(&theta, data)
}

/// Starting point in natural coordinates: `p₀` from the Kaplan–Meier plateau,
/// scale and shape from least squares on linearized plotting positions.
pub fn initial_guess<M: CureModel>(data: &CensoredSample) -> [f64; 3] {
    let km = kaplan_meier(data);
    let p0 = km.plateau().clamp(0.01, 0.95);
    let mut previous = 1.0;
    let points: Vec<(f64, f64)> = km
        .times()
        .iter()
        .zip(km.survival())
        .map(|(&t, &s)| {
            let mid = 0.5 * (previous + s);
            previous = s;
            (t.ln(), (mid - p0) / (1.0 - p0))
        })
        .collect();
    let (scale, shape) = M::linearized_start(&points).unwrap_or_else(|| {
        let mut times = data.times().to_vec();
        times.sort_by(f64::total_cmp);
        (times[times.len() / 2], 1.0)
    });
    [scale, shape.clamp(0.05, 50.0), p0]
}

/// Maximum-likelihood fit of any [`CureModel`] with Wald intervals at `level`.
pub fn fit_model<M: CureModel>(
    data: &CensoredSample,
    config: &OptimizerConfig,
    level: f64,
) -> Result<FitResult<M::Params>> {
    if !(level > 0.0 && level < 1.0) {
        return domain(format!("confidence level must lie in (0, 1), got {level}"));
    }
    if data.n_events() == 0 {
        return Err(Error::NoEvents);
    }
    let prepared = Prepared::new(data);
    let x0 = to_unconstrained(&initial_guess::<M>(data));
    let best = minimize(
        |u| unconstrained_objective::<M>(u, &prepared),
        x0,
        config,
    )?;

    let objective = |u: &[f64; 3]| unconstrained_objective::<M>(u, &prepared);
    let (u_hat, value) = newton_polish(objective, best.x, best.value);
    let theta = from_unconstrained(&u_hat);
    let estimates = M::from_natural(theta)?;
    let negll = |x: &[f64; 3]| -M::log_likelihood(x, &prepared);
    let observed_info = fd_hessian(negll, &theta, DEFAULT_FD_STEP).ok();

    let z = normal_quantile(0.5 * (1.0 + level));
    let covariance = observed_info.as_ref().and_then(|h| h.invert_spd().ok());
    let std_errors = covariance.map(|c| c.diag().map(f64::sqrt));
    let intervals = std_errors.map(|se| {
        let mut out = [ConfidenceInterval { lower: 0.0, upper: 0.0 }; 3];
        for i in 0..3 {
            let upper_bound = if i == 2 { 1.0 } else { f64::INFINITY };
            out[i] = ConfidenceInterval {
                lower: (theta[i] - z * se[i]).clamp(0.0, upper_bound),
                upper: (theta[i] + z * se[i]).clamp(0.0, upper_bound),
            };
        }
        out
    });

    Ok(FitResult {
        estimates,
        theta,
        loglik: -value,
        observed_info,
        std_errors,
        intervals,
        level,
        converged: best.converged,
        n_events: data.n_events(),
        n_censored: data.n_censored(),
        unconstrained: u_hat,
    })
}

/// A few safeguarded Newton steps on finite-difference derivatives. The simplex
/// stops on a relative function spread, which for large samples still leaves
/// a visible gradient; steps that do not lower the objective are discarded.
fn newton_polish<F: Fn(&[f64; 3]) -> f64>(f: F, mut u: [f64; 3], mut value: f64) -> ([f64; 3], f64) {
    for _ in 0..4 {
        let Ok(g) = fd_gradient(&f, &u, DEFAULT_FD_STEP) else { break };
        if g.iter().all(|v| v.abs() < 1e-9) {
            break;
        }
        let Some(inv) = fd_hessian(&f, &u, DEFAULT_FD_STEP)
            .ok()
            .and_then(|h| h.invert_spd().ok())
        else {
            break;
        };
        let mut cand = u;
        for (i, c) in cand.iter_mut().enumerate() {
            *c -= (0..3).map(|j| inv.get(i, j) * g[j]).sum::<f64>();
        }
        let v = f(&cand);
        if !(v <= value) {
            break;
        }
        u = cand;
        value = v;
    }
    (u, value)
}

/// Fits the long-term Fréchet model.
pub fn fit(data: &CensoredSample, config: &OptimizerConfig, level: f64) -> Result<FitResult<LfParams>> {
    fit_model::<LongTermFrechet>(data, config, level)
}

/// Log-likelihood in the closed form, summing the event and censored terms separately.
pub fn log_likelihood(params: &LfParams, data: &CensoredSample) -> Result<f64> {
    if !params.is_interior() {
        return domain(format!(
            "log-likelihood requires 0 < p < 1, got p = {}",
            params.p()
        ));
    }
    let v = LongTermFrechet::log_likelihood(&LongTermFrechet::to_natural(params), &Prepared::new(data));
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteObjective)
    }
}

/// `Σ δ_i ln f(t_i) + (1 - δ_i) ln S(t_i)`, one observation at a time.
pub fn log_likelihood_by_observation(params: &LfParams, data: &CensoredSample) -> Result<f64> {
    let mut total = 0.0;
    for (t, event) in data.iter() {
        total += if event {
            params.log_pdf(t)?
        } else {
            params.log_survival(t)?
        };
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFiniteObjective)
    }
}

/// Finite-difference gradient of the log-likelihood at the estimate, in the
/// unconstrained coordinates. Near zero at an interior optimum.
pub fn score_check_model<M: CureModel>(
    result: &FitResult<M::Params>,
    data: &CensoredSample,
) -> Result<[f64; 3]> {
    let prepared = Prepared::new(data);
    let ll = |u: &[f64; 3]| M::log_likelihood(&from_unconstrained(u), &prepared);
    fd_gradient(ll, &to_unconstrained(&result.theta), DEFAULT_FD_STEP)
}

pub fn score_check(result: &FitResult<LfParams>, data: &CensoredSample) -> Result<[f64; 3]> {
    score_check_model::<LongTermFrechet>(result, data)
}
