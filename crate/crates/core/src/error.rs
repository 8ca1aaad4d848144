use thiserror::Error;

/// Errors surfaced by the numerical routines.
///
/// Variants map onto the failure modes of the public operations: invalid
/// descriptor parameters, evaluation at a kernel pole, quadrature that
/// cannot reach the requested tolerance, Monte Carlo diagnostics, and
/// integrals the well-posedness check has classified as divergent.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("unsupported evaluation: {0}")]
    UnsupportedEvaluation(String),

    #[error("quadrature failed to reach tolerance: requested {requested:.3e}, achieved {achieved:.3e}")]
    QuadratureError { requested: f64, achieved: f64 },

    #[error("Monte Carlo diagnostic: {0}")]
    McDiagnostic(String),

    #[error("Gram matrix is indefinite beyond tolerance: most negative eigenvalue {min_eigenvalue:.3e} vs trace {trace:.3e}")]
    InvalidGram { min_eigenvalue: f64, trace: f64 },

    #[error("integral is divergent: {0}")]
    Divergent(String),

    #[error("result is inconclusive: {0}")]
    Inconclusive(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed descriptor document: {0}")]
    Schema(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
