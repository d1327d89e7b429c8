use crate::linalg::Field;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("matrix is not Hermitian (‖A − A*‖ = {skew:e})")]
    NotHermitian { skew: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("not a frame: {0}")]
    NotAFrame(String),
    #[error("field mismatch: expected {expected} input, got {actual}")]
    FieldMismatch { expected: Field, actual: Field },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("sign search aborted after {patterns_explored} patterns with {} partial solution(s)", partial_rays.len())]
    SearchAborted {
        patterns_explored: u64,
        partial_rays: Vec<Vec<f64>>,
    },
    #[error("subset is not a failure witness: {0}")]
    InvalidSubset(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
