use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("input is empty")]
    EmptyInput,

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid weight {value} at index {index}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("cluster count k = {k} must be at least {min}")]
    InvalidK { k: usize, min: usize },

    #[error("k1 = {k1} outside the valid range {min}..={max}")]
    InvalidK1 { k1: usize, min: usize, max: usize },

    #[error("k2 = {k2} outside the valid range 1..={max}")]
    InvalidK2 { k2: usize, max: usize },

    #[error("fold count m = {m} is invalid for {rows} rows")]
    FoldTooSmall { m: usize, rows: usize },

    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("design matrix is rank deficient (condition number {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("nullspace computation returned a zero vector")]
    ReturnsDegenerate,

    #[error("coordinate descent did not converge after {iterations} sweeps (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at row {row}, column {col}: {message}")]
    Parse {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("column {col} missing in row {row}")]
    MissingColumn { row: usize, col: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
