use thiserror::Error;

/// Failures raised by the numeric, geometric and pipeline layers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid precision configuration: {0}")]
    InvalidConfig(String),

    #[error("root finder did not converge (degree {degree}, {bits} bits)")]
    NonConvergence { degree: usize, bits: usize },

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("interpolation sample design is singular")]
    SingularInterpolation,

    #[error("resultant vanishes identically (common component)")]
    IdenticallyZero,

    #[error("ambient dimension {actual} is too small, {required} required")]
    AmbientTooSmall { required: usize, actual: usize },

    #[error("genericity failure: {0}")]
    GenericityFailure(String),

    #[error("point does not satisfy the system")]
    QNotOnSystem,

    #[error("gcd is constant: value is not a root of the transformed polynomial")]
    EmptyGcd,

    #[error("quadratic form too degenerate: {0}")]
    RankCollapse(String),

    #[error("curves share a common component")]
    CommonComponent,

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Whether doubling the working precision is a sensible response.
    pub fn wants_more_precision(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::IllConditioned(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
