use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate in point {index}")]
    NonFinite { index: usize },

    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("need at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("points {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("incomplete beta continued fraction did not converge (z={z}, a={a}, b={b})")]
    BetaNoConvergence { z: f64, a: f64, b: f64 },

    #[error("quadrature budget exhausted: estimate {estimate} with error bound {abs_err}")]
    IntegrationBudget { estimate: f64, abs_err: f64 },

    #[error("sample {index}: {source}")]
    Sample {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("could not parse input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical routine rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::BetaNoConvergence { .. } | Error::IntegrationBudget { .. } => true,
            Error::Sample { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub fn is_invariant(&self) -> bool {
        match self {
            Error::Invariant(_) => true,
            Error::Sample { source, .. } => source.is_invariant(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
