//! Shared numerical machinery: special functions, optimization, finite
//! differences, small dense linear algebra and quadrature.

mod diff;
mod gamma;
mod matrix;
mod optimize;
mod quad;

pub use diff::{fd_gradient, fd_hessian, DEFAULT_FD_STEP};
pub use gamma::{gamma, log_gamma};
pub use matrix::{mat_mul, SymMatrix3};
pub use optimize::{minimize, Minimum, OptimizerConfig};
pub use quad::integrate;

use statrs::distribution::{ContinuousCDF, Normal};

/// Standard normal quantile, `Φ⁻¹(prob)`.
pub fn normal_quantile(prob: f64) -> f64 {
    Normal::standard().inverse_cdf(prob)
}
