use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("space mismatch in {context}")]
    SpaceMismatch { context: &'static str },
    #[error("{what} is not self-adjoint (deviation {deviation:.3e})")]
    NotSelfAdjoint { what: &'static str, deviation: f64 },
    #[error("{what} is not ergodic: {detail}")]
    NotErgodic { what: &'static str, detail: String },
    #[error("{what} is not gapped (gap {gap:.3e})")]
    NotGapped { what: &'static str, gap: f64 },
    #[error("jump-operator extraction unavailable: {reason}")]
    ExtractionUnavailable { reason: String },
    #[error("{what} has negative eigenvalue {min_eig:.3e} beyond tolerance")]
    PsdViolation { what: &'static str, min_eig: f64 },
    #[error("hierarchy residual {residual:.3e} at order {order} exceeds tolerance")]
    ResidualFailure { order: usize, residual: f64 },
    #[error("model invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("linear algebra backend: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
