//! The long-term Fréchet (LF) distribution.
//!
//! A fraction `p` of the population is cured and never fails; the remaining
//! `1 - p` fail according to a Fréchet (inverse Weibull) law with scale
//! `lambda` and shape `alpha`:
//!
//! ```text
//! F(t) = (1 - p) exp(-(t/λ)^-α)
//! S(t) = p + (1 - p) (1 - exp(-(t/λ)^-α))
//! f(t) = (1 - p) (α/λ) (t/λ)^-(α+1) exp(-(t/λ)^-α)
//! ```
//!
//! The distribution is improper: `F(∞) = 1 - p`. All evaluations pass through
//! `log z = -α (ln t - ln λ)` so that extreme `t/λ` ratios do not overflow.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::log_gamma;

/// Parameters `(λ, α, p)` of the LF distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LfParams {
    lambda: f64,
    alpha: f64,
    p: f64,
}

impl LfParams {
    /// `lambda > 0`, `alpha > 0`, `0 <= p <= 1`.
    pub fn new(lambda: f64, alpha: f64, p: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("lambda must be finite and positive, got {lambda}"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return domain(format!("alpha must be finite and positive, got {alpha}"));
        }
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("p must lie in [0, 1], got {p}"));
        }
        Ok(Self { lambda, alpha, p })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// True when `p` is strictly inside `(0, 1)`, as required for estimation.
    pub fn is_interior(&self) -> bool {
        self.p > 0.0 && self.p < 1.0
    }

    /// `ln z` where `z = (t/λ)^-α`.
    #[inline]
    fn log_z(&self, t: f64) -> f64 {
        -self.alpha * (t.ln() - self.lambda.ln())
    }

    /// Log-density; `-∞` is never produced, `p = 1` is a domain error.
    pub fn log_pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if self.p >= 1.0 {
            return domain("log_pdf is undefined for p = 1 (the density is identically zero)");
        }
        let log_z = self.log_z(t);
        // ln f = ln(1-p) + ln α - ln t + ln z - z
        Ok((-self.p).ln_1p() + self.alpha.ln() - t.ln() + log_z - log_z.exp())
    }

    /// Improper density `(1 - p) f₀(t)`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if self.p >= 1.0 {
            return Ok(0.0);
        }
        self.log_pdf(t).map(f64::exp)
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok((1.0 - self.p) * (-self.log_z(t).exp()).exp())
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        // 1 - exp(-z) via expm1 keeps precision when z is small (large t).
        let susceptible = -(-self.log_z(t).exp()).exp_m1();
        Ok(self.p + (1.0 - self.p) * susceptible)
    }

    /// `ln S(t)`, finite whenever `p > 0` or `t` is not extreme.
    pub fn log_survival(&self, t: f64) -> Result<f64> {
        self.survival(t).map(f64::ln)
    }

    pub fn hazard(&self, t: f64) -> Result<f64> {
        let s = self.survival(t)?;
        Ok(self.pdf(t)? / s)
    }

    /// Inverse of [`cdf`](Self::cdf) on `0 < u < 1 - p`:
    /// `t_u = λ [ln((1 - p)/u)]^(-1/α)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        let top = 1.0 - self.p;
        if !(u > 0.0 && u < top) {
            return domain(format!("quantile requires 0 < u < 1 - p = {top}, got {u}"));
        }
        let w = (top / u).ln();
        Ok(self.lambda * (-w.ln() / self.alpha).exp())
    }

    /// `E[T^r 1{susceptible}] = (1 - p) λ^r Γ(1 - r/α)` for `α > r`.
    pub fn raw_moment(&self, order: MomentOrder) -> Result<f64> {
        let r = order.get() as f64;
        if self.alpha <= r {
            return Err(Error::MomentUndefined {
                alpha: self.alpha,
                order: order.get(),
            });
        }
        let lg = log_gamma(1.0 - r / self.alpha)?;
        Ok((1.0 - self.p) * (r * self.lambda.ln() + lg).exp())
    }

    pub fn mean(&self) -> Result<f64> {
        self.raw_moment(MomentOrder::FIRST)
    }

    /// `(1 - p) λ² [Γ(1 - 2/α) - (1 - p) Γ(1 - 1/α)²]` for `α > 2`.
    pub fn variance(&self) -> Result<f64> {
        if self.alpha <= 2.0 {
            return Err(Error::MomentUndefined {
                alpha: self.alpha,
                order: 2,
            });
        }
        let g1 = log_gamma(1.0 - 1.0 / self.alpha)?.exp();
        let g2 = log_gamma(1.0 - 2.0 / self.alpha)?.exp();
        let q = 1.0 - self.p;
        Ok(q * self.lambda * self.lambda * (g2 - q * g1 * g1))
    }

    /// Draws one latent failure time: cured with probability `p`, otherwise
    /// `λ (-ln U)^(-1/α)` with `U` uniform on `(0, 1)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Draw {
        let cure: f64 = rng.random();
        if cure < self.p {
            return Draw::Cured;
        }
        let u: f64 = rng.sample(rand::distr::Open01);
        Draw::Failure(self.lambda * (-(-u.ln()).ln() / self.alpha).exp())
    }

    /// `n` independent draws from a generator seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<Draw>> {
        if n == 0 {
            return domain("sample size must be at least 1");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n).map(|_| self.draw(&mut rng)).collect())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        domain(format!("time must be finite and positive, got {t}"))
    }
}

/// One draw of the latent failure time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Draw {
    Failure(f64),
    /// Never fails; the latent failure time is infinite.
    Cured,
}

impl Draw {
    pub fn failure_time(&self) -> Option<f64> {
        match *self {
            Draw::Failure(t) => Some(t),
            Draw::Cured => None,
        }
    }
}

/// Positive moment order `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct MomentOrder(u32);

impl MomentOrder {
    pub const FIRST: MomentOrder = MomentOrder(1);

    pub fn new(r: u32) -> Result<Self> {
        if r == 0 {
            return domain("moment order must be at least 1");
        }
        Ok(Self(r))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Fréchet density and survival, the `p = 0` case written out directly.
pub mod frechet {
    pub fn pdf(t: f64, lambda: f64, alpha: f64) -> f64 {
        let x = t / lambda;
        alpha / lambda * x.powf(-(alpha + 1.0)) * (-x.powf(-alpha)).exp()
    }

    pub fn survival(t: f64, lambda: f64, alpha: f64) -> f64 {
        1.0 - (-(t / lambda).powf(-alpha)).exp()
    }
}
