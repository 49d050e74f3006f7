use thiserror::Error;

/// Errors raised by the distribution, estimation and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment of order {order} does not exist for shape alpha = {alpha} (requires alpha > {order})")]
    MomentUndefined { alpha: f64, order: u32 },

    #[error("objective is not finite at any probed point")]
    NonFiniteObjective,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("sample contains no observed events; the model is not identifiable")]
    NoEvents,

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error(
        "cannot calibrate censoring to {target}: total censoring must lie strictly between the cure fraction {cure_fraction} and 1"
    )]
    CalibrationInfeasible { target: f64, cure_fraction: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
