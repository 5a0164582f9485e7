use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid too small: support needs box {needed:?}")]
    GridTooSmall { needed: Vec<(f64, f64)> },

    #[error("evaluator returned non-finite value at {point:?}")]
    NonFinite { point: Vec<(f64, f64)> },

    #[error("generator {index} is not orthogonal (|M^T M - I| = {defect:e})")]
    NonOrthogonal { index: usize, defect: f64 },

    #[error("group order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("no point with trivial stabilizer after {draws} draws")]
    NoGenericPoint { draws: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature for {what} did not converge (last doubling changed result by {change:e})")]
    Accuracy { what: String, change: f64 },

    #[error("degenerate denominator: {zeros} of {total} samples numerically zero")]
    DegenerateDenominator { zeros: usize, total: usize },

    #[error("refused: {0}")]
    Refused(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
