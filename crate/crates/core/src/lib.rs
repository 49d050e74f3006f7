//! Long-term Fréchet cure-rate survival modelling.
//!
//! - [`distribution`]: density, distribution, quantile, moments and sampling
//! - [`inference`]: censored-data maximum likelihood with Wald intervals
//! - [`montecarlo`]: estimator quality under simulated censoring
//! - [`model_eval`]: Kaplan–Meier, AIC/AICc and the long-term Weibull baseline
//! - [`numerics`]: optimizer, finite differences, log-gamma

pub mod data;
pub mod distribution;
pub mod error;
pub mod inference;
pub mod model_eval;
pub mod montecarlo;
pub mod numerics;

pub use data::{kersey1987, CensoredSample};
pub use distribution::{Draw, LfParams, MomentOrder};
pub use error::{Error, Result};
pub use inference::{fit, score_check, ConfidenceInterval, FitResult};
pub use model_eval::{kaplan_meier, KmCurve, ModelScore};
pub use numerics::{OptimizerConfig, SymMatrix3};
