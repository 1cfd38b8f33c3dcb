use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("BadN: the number of spins must be at least 1 (got {0})")]
    BadN(i64),

    #[error("ParityMismatch: 2m = {twice_m} and N = {n} must have the same parity")]
    ParityMismatch { n: i64, twice_m: i64 },

    #[error("OutOfRange: m = {twice_m}/2 must satisfy 0 <= m <= N/2 = {n}/2")]
    OutOfRange { n: i64, twice_m: i64 },

    #[error("NoConvergence: {0}")]
    NoConvergence(String),

    #[error(
        "EnvelopeBreach: density {density:.6e} at x = {x:.6} exceeds envelope {envelope:.6e}; \
         rebuild the sampler with a denser envelope grid or a larger slack"
    )]
    EnvelopeBreach { x: f64, density: f64, envelope: f64 },

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short rule name, stable across releases. Used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadN(_) => "BadN",
            Error::ParityMismatch { .. } => "ParityMismatch",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::NoConvergence(_) => "NoConvergence",
            Error::EnvelopeBreach { .. } => "EnvelopeBreach",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
