use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear system inconsistent (residual {residual:.3e})")]
    Infeasible { residual: f64 },

    #[error("iteration budget exceeded; best value so far {best}")]
    BudgetExceeded { best: f64 },

    #[error("ill-conditioned construction: {0}")]
    IllConditioned(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("certificate unavailable: {0}")]
    CertificateUnavailable(String),

    #[error("reconstruction failure: relative residual {residual:.3e} exceeds {limit:.1e}")]
    ReconstructionFailure { residual: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
