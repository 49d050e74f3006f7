//! Kaplan–Meier estimation, information criteria, the long-term Weibull
//! comparison model and criterion-based ranking.

use serde::{Deserialize, Serialize};

use crate::data::CensoredSample;
use crate::error::{domain, Error, Result};
use crate::inference::{fit_model, least_squares, CureModel, FitResult, Prepared};
use crate::numerics::OptimizerConfig;

/// Product-limit estimate of the survival function.
///
/// `survival[i]` is the estimate on `[times[i], times[i+1])`; before the
/// first event time the estimate is 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmCurve {
    times: Vec<f64>,
    survival: Vec<f64>,
    at_risk: Vec<usize>,
    events: Vec<usize>,
}

impl KmCurve {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    pub fn at_risk(&self) -> &[usize] {
        &self.at_risk
    }

    pub fn events(&self) -> &[usize] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Right-continuous step function evaluated at `t`.
    pub fn survival_at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&x| x <= t);
        if idx == 0 {
            1.0
        } else {
            self.survival[idx - 1]
        }
    }

    /// Last value of the step function: the nonparametric cure-fraction estimate.
    pub fn plateau(&self) -> f64 {
        self.survival.last().copied().unwrap_or(1.0)
    }
}

/// Product-limit estimator. At tied times, events are counted before
/// censorings, so censored subjects at `t` are still at risk at `t`.
pub fn kaplan_meier(data: &CensoredSample) -> KmCurve {
    let mut obs: Vec<(f64, bool)> = data.iter().collect();
    obs.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));

    let mut curve = KmCurve {
        times: Vec::new(),
        survival: Vec::new(),
        at_risk: Vec::new(),
        events: Vec::new(),
    };
    let mut at_risk = obs.len();
    let mut s = 1.0;
    let mut i = 0;
    while i < obs.len() {
        let t = obs[i].0;
        let mut deaths = 0;
        let mut removed = 0;
        while i < obs.len() && obs[i].0 == t {
            deaths += usize::from(obs[i].1);
            removed += 1;
            i += 1;
        }
        if deaths > 0 {
            s *= 1.0 - deaths as f64 / at_risk as f64;
            curve.times.push(t);
            curve.survival.push(s);
            curve.at_risk.push(at_risk);
            curve.events.push(deaths);
        }
        at_risk -= removed;
    }
    curve
}

/// Nonparametric cure fraction: the final Kaplan–Meier plateau (1 when no events).
pub fn km_cure_fraction(curve: &KmCurve) -> f64 {
    curve.plateau()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub neg_loglik: f64,
    pub aic: f64,
    pub aicc: f64,
    pub k: usize,
    pub n: usize,
}

/// AIC `= -2ℓ + 2k` and AICc `= AIC + 2k(k+1)/(n-k-1)`; requires `n > k + 1`.
pub fn information_criteria(loglik: f64, k: usize, n: usize) -> Result<ModelScore> {
    if n <= k + 1 {
        return domain(format!(
            "AICc needs n > k + 1 (got n = {n}, k = {k})"
        ));
    }
    let kf = k as f64;
    let aic = -2.0 * loglik + 2.0 * kf;
    let aicc = aic + 2.0 * kf * (kf + 1.0) / (n as f64 - kf - 1.0);
    Ok(ModelScore {
        neg_loglik: -loglik,
        aic,
        aicc,
        k,
        n,
    })
}

impl<P> FitResult<P> {
    /// Criteria for a three-parameter fit.
    pub fn score(&self) -> Result<ModelScore> {
        information_criteria(self.loglik, 3, self.n())
    }
}

/// Parameters of the long-term Weibull model, with susceptible survival
/// `exp(-(t/scale)^shape)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LtWeibullParams {
    scale: f64,
    shape: f64,
    p: f64,
}

impl LtWeibullParams {
    pub fn new(scale: f64, shape: f64, p: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && shape > 0.0 && shape.is_finite()) {
            return domain(format!(
                "scale and shape must be finite and positive, got ({scale}, {shape})"
            ));
        }
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("p must lie in (0, 1), got {p}"));
        }
        Ok(Self { scale, shape, p })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn survival(&self, t: f64) -> f64 {
        self.p + (1.0 - self.p) * (-(t / self.scale).powf(self.shape)).exp()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LongTermWeibull;

impl CureModel for LongTermWeibull {
    type Params = LtWeibullParams;
    const NAMES: [&'static str; 3] = ["scale", "shape", "p"];

    fn from_natural(theta: [f64; 3]) -> Result<LtWeibullParams> {
        LtWeibullParams::new(theta[0], theta[1], theta[2])
    }

    fn to_natural(params: &LtWeibullParams) -> [f64; 3] {
        [params.scale, params.shape, params.p]
    }

    fn log_likelihood(theta: &[f64; 3], data: &Prepared) -> f64 {
        let [scale, shape, p] = *theta;
        if !(scale > 0.0 && shape > 0.0 && p > 0.0 && p < 1.0) {
            return f64::NAN;
        }
        let log_scale = scale.ln();
        let d = data.n_events() as f64;
        let events: f64 = data
            .event_log_times()
            .iter()
            .map(|lt| {
                let x = lt - log_scale;
                (shape - 1.0) * x - (shape * x).exp()
            })
            .sum();
        let censored: f64 = data
            .censored_log_times()
            .iter()
            .map(|lt| (p + (1.0 - p) * (-(shape * (lt - log_scale)).exp()).exp()).ln())
            .sum();
        d * ((-p).ln_1p() + shape.ln() - log_scale) + events + censored
    }

    fn linearized_start(points: &[(f64, f64)]) -> Option<(f64, f64)> {
        // S0 = exp(-(t/s)^k)  =>  ln(-ln S0) = k ln t - k ln s
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter(|(_, s0)| *s0 > 0.0 && *s0 < 1.0)
            .map(|&(lt, s0)| (lt, (-s0.ln()).ln()))
            .collect();
        let (slope, intercept) = least_squares(&pts)?;
        (slope > 0.0).then(|| ((-intercept / slope).exp(), slope))
    }
}

pub fn fit_lt_weibull(
    data: &CensoredSample,
    config: &OptimizerConfig,
    level: f64,
) -> Result<FitResult<LtWeibullParams>> {
    fit_model::<LongTermWeibull>(data, config, level)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedModel {
    pub name: String,
    pub score: ModelScore,
    /// 1-based position after sorting.
    pub rank: usize,
}

/// Ascending by AICc, then AIC, then `-ln L`; the sort is stable so exact
/// ties keep their input order.
pub fn compare(models: Vec<(String, ModelScore)>) -> Result<Vec<RankedModel>> {
    if models.is_empty() {
        return Err(Error::Domain("nothing to compare".into()));
    }
    let mut models = models;
    models.sort_by(|a, b| {
        a.1.aicc
            .total_cmp(&b.1.aicc)
            .then(a.1.aic.total_cmp(&b.1.aic))
            .then(a.1.neg_loglik.total_cmp(&b.1.neg_loglik))
    });
    Ok(models
        .into_iter()
        .enumerate()
        .map(|(i, (name, score))| RankedModel {
            name,
            score,
            rank: i + 1,
        })
        .collect())
}
