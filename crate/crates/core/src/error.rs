use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum HlsError {
    #[error("zero vector where a direction is required")]
    ZeroVector,
    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HlsError>;
