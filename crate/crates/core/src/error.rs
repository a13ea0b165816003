use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid scheme `{text}`: {reason}")]
    InvalidScheme { text: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid zone partition: {0}")]
    InvalidPartition(String),

    #[error("window of {len} labels exceeds the required window of {max}")]
    WindowTooLong { len: usize, max: usize },

    #[error("label {0:?} is not part of this scheme's alphabet")]
    ForeignLabel(crate::rules::ZoneLabel),

    #[error("expected {expected} zone probabilities, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("scheme cannot signal under this distribution")]
    CannotSignal,

    #[error("iterative solver did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("second moment system gave a negative variance ({0:e})")]
    NegativeVariance(f64),

    #[error("run-length distribution not resolved within {0} observations")]
    IterationCap(u64),

    #[error("target in-control ARL {target} is below the achievable floor {floor:.4}")]
    TargetBelowFloor { target: f64, floor: f64 },

    #[error("in-control ARL is not monotone in the limit near L = {limit}")]
    NonMonotone { limit: f64 },

    #[error("{0}")]
    Unsupported(String),
}
