use thiserror::Error;

/// Errors raised by the numerical kernels, estimators and simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("argument {value} outside domain: {reason}")]
    Domain { value: f64, reason: &'static str },

    #[error(
        "quadrature did not converge: error estimate {error_estimate:.3e} \
         after {subdivisions} subdivisions"
    )]
    Quadrature {
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("could not bracket a root after {expansions} expansions")]
    Bracket { expansions: usize },

    #[error("root finder did not converge after {iterations} iterations")]
    RootNotConverged { iterations: usize },

    #[error("sample too small (n = {n}): {reason}")]
    SampleSize { n: usize, reason: String },

    #[error("Hill pivot X'_(n-k) = {pivot} is not positive (k = {k}); the log-ratio is undefined")]
    TailPositivity { pivot: f64, k: usize },

    #[error(
        "no block sum fell within +/-{eps} of zero ({blocks} blocks); \
         the scale estimate is undefined, enlarge the bandwidth"
    )]
    BandwidthTooSmall { eps: f64, blocks: usize },

    #[error("degenerate affine map: scale factor a = 0")]
    DegenerateLaw,

    #[error("replication {replication} ran past {limit} cycles without crossing the threshold")]
    Runaway { replication: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}
