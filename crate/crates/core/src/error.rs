use std::path::PathBuf;

/// Errors raised by scenario loading, the bound formulas and the Monte
/// Carlo experiments.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("target {target}: a^2 * P_radar is zero, delay is unobservable")]
    DegenerateLink { target: usize },

    #[error("operation is defined for a single target, link budget has {count}")]
    MultiTarget { count: usize },

    #[error("target index {index} out of range for {count} target(s)")]
    TargetIndex { index: usize, count: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(
        "integrated SNR {isnr:.4} is below {min}: the matched-filter estimator does not \
         reach the Cramer-Rao variance in this regime (raise radar power or time-bandwidth)"
    )]
    IsnrTooLow { isnr: f64, min: f64 },

    #[error(
        "sigma_tau_proc * B = {measured:.4} exceeds {max}: the derivative approximation \
         of the residual needs the process spread well inside one over the bandwidth"
    )]
    PremiseViolated { measured: f64, max: f64 },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
