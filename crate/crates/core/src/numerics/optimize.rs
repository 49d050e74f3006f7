//! Derivative-free minimization over three coordinates.
//!
//! Nelder–Mead with a multi-start wrapper and an optional simulated
//! annealing prelude. Non-finite objective values are treated as rejected
//! points (they compare as `+∞`), so callers can encode constraints by
//! returning `NaN` or `∞` outside the feasible region.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Iteration budget for each Nelder–Mead run.
    pub max_iterations: usize,
    /// Relative spread of function values across the simplex that counts as converged.
    pub simplex_tolerance: f64,
    /// Additional perturbed starting points beyond `x0`.
    pub restarts: usize,
    pub annealing_enabled: bool,
    pub annealing_steps: usize,
    pub annealing_initial_temp: f64,
    /// Seeds restart perturbations and the annealing chain.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 5_000,
            simplex_tolerance: 1e-12,
            restarts: 4,
            annealing_enabled: false,
            annealing_steps: 10_000,
            annealing_initial_temp: 10.0,
            seed: 0x5eed,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return domain("max_iterations must be at least 1");
        }
        if !(self.simplex_tolerance > 0.0) {
            return domain("simplex_tolerance must be positive");
        }
        if self.annealing_enabled {
            if self.annealing_steps < 1 {
                return domain("annealing_steps must be at least 1");
            }
            if !(self.annealing_initial_temp > 0.0) {
                return domain("annealing_initial_temp must be positive");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: [f64; 3],
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const RESTART_SCALE: f64 = 0.5;
const MAX_POLISH_ROUNDS: usize = 6;

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: Fn(&[f64; 3]) -> f64> Counted<F> {
    fn call(&mut self, x: &[f64; 3]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }
}

/// Minimizes `f` starting from `x0`.
///
/// Every start is followed by repeated Nelder–Mead runs from the incumbent
/// until a fresh simplex no longer improves the value; the best result over
/// all starts is returned and is never worse than `f(x0)`.
pub fn minimize<F>(f: F, x0: [f64; 3], config: &OptimizerConfig) -> Result<Minimum>
where
    F: Fn(&[f64; 3]) -> f64,
{
    config.validate()?;
    let mut obj = Counted { f, evaluations: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let f0 = obj.call(&x0);
    let mut best = Minimum {
        x: x0,
        value: f0,
        converged: false,
        evaluations: 0,
    };

    for start in 0..=config.restarts {
        let mut x = if start == 0 {
            x0
        } else {
            x0.map(|xi| xi + RESTART_SCALE * rng.sample::<f64, _>(StandardNormal))
        };
        if config.annealing_enabled {
            x = anneal(&mut obj, x, config, &mut rng);
        }
        let candidate = polish(&mut obj, x, config);
        if candidate.value < best.value
            || (candidate.value == best.value && candidate.converged && !best.converged)
        {
            best = candidate;
        }
    }

    if !best.value.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    best.evaluations = obj.evaluations;
    Ok(best)
}

fn polish<F: Fn(&[f64; 3]) -> f64>(
    obj: &mut Counted<F>,
    x: [f64; 3],
    config: &OptimizerConfig,
) -> Minimum {
    let mut current = nelder_mead(obj, x, config);
    for _ in 0..MAX_POLISH_ROUNDS {
        if !current.value.is_finite() {
            break;
        }
        let next = nelder_mead(obj, current.x, config);
        let gain = current.value - next.value;
        let improved = next.value <= current.value;
        if improved {
            current = next;
        }
        if gain <= config.simplex_tolerance * (current.value.abs() + config.simplex_tolerance) {
            break;
        }
    }
    current
}

fn initial_simplex(x: [f64; 3]) -> [[f64; 3]; 4] {
    let mut simplex = [x; 4];
    for i in 0..3 {
        simplex[i + 1][i] += 0.2 * x[i].abs().max(1.0);
    }
    simplex
}

fn nelder_mead<F: Fn(&[f64; 3]) -> f64>(
    obj: &mut Counted<F>,
    x: [f64; 3],
    config: &OptimizerConfig,
) -> Minimum {
    let mut pts = initial_simplex(x);
    let mut vals = pts.map(|p| obj.call(&p));
    let mut converged = false;

    for _ in 0..config.max_iterations {
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.map(|i| pts[i]);
        vals = order.map(|i| vals[i]);

        let (lo, hi) = (vals[0], vals[3]);
        if lo.is_finite()
            && hi.is_finite()
            && hi - lo <= config.simplex_tolerance * (lo.abs() + config.simplex_tolerance)
        {
            converged = true;
            break;
        }

        let mut centroid = [0.0; 3];
        for p in &pts[..3] {
            for k in 0..3 {
                centroid[k] += p[k] / 3.0;
            }
        }
        let along = |t: f64| -> [f64; 3] {
            let mut out = [0.0; 3];
            for k in 0..3 {
                out[k] = centroid[k] + t * (pts[3][k] - centroid[k]);
            }
            out
        };

        let xr = along(-REFLECT);
        let fr = obj.call(&xr);
        if fr < vals[0] {
            let xe = along(-REFLECT * EXPAND);
            let fe = obj.call(&xe);
            if fe < fr {
                pts[3] = xe;
                vals[3] = fe;
            } else {
                pts[3] = xr;
                vals[3] = fr;
            }
            continue;
        }
        if fr < vals[2] {
            pts[3] = xr;
            vals[3] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[3] {
            let xc = along(-REFLECT * CONTRACT);
            (xc, obj.call(&xc))
        } else {
            let xc = along(CONTRACT);
            (xc, obj.call(&xc))
        };
        if fc < vals[3].min(fr) {
            pts[3] = xc;
            vals[3] = fc;
            continue;
        }
        for i in 1..4 {
            for k in 0..3 {
                pts[i][k] = pts[0][k] + SHRINK * (pts[i][k] - pts[0][k]);
            }
            vals[i] = obj.call(&pts[i]);
        }
    }

    let best = (0..4).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    Minimum {
        x: pts[best],
        value: vals[best],
        converged,
        evaluations: 0,
    }
}

/// Simulated annealing in the style of R's `optim(method = "SANN")`:
/// Gaussian proposals scaled by the current temperature, logarithmic cooling,
/// Metropolis acceptance. Returns the best point visited.
fn anneal<F: Fn(&[f64; 3]) -> f64>(
    obj: &mut Counted<F>,
    x0: [f64; 3],
    config: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> [f64; 3] {
    const STEPS_PER_TEMP: usize = 10;
    let mut x = x0;
    let mut fx = obj.call(&x);
    let (mut best_x, mut best_f) = (x, fx);
    for k in 0..config.annealing_steps {
        let level = (k / STEPS_PER_TEMP * STEPS_PER_TEMP) as f64;
        let temp = config.annealing_initial_temp / (level + std::f64::consts::E).ln();
        // Proposal scale shrinks with temperature; 0.1 maps temp 10 to unit steps.
        let scale = 0.1 * temp;
        let cand = x.map(|xi| xi + scale * rng.sample::<f64, _>(StandardNormal));
        let fc = obj.call(&cand);
        if !fc.is_finite() {
            continue;
        }
        let accept = fc <= fx || rng.random::<f64>() < (-(fc - fx) / temp).exp();
        if accept {
            x = cand;
            fx = fc;
            if fx < best_f {
                best_f = fx;
                best_x = x;
            }
        }
    }
    best_x
}
