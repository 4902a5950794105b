use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |H[{row}][{col}] - conj(H[{col}][{row}])| = {defect:.3e}")]
    NonHermitianInput { row: usize, col: usize, defect: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps (residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is not symmetric: |A[{row}][{col}] - A[{col}][{row}]| = {defect:.3e}")]
    NotSymmetric { row: usize, col: usize, defect: f64 },
    #[error("matrix is not skew-symmetric: |X[{row}][{col}] + X[{col}][{row}]| = {defect:.3e}")]
    NotSkew { row: usize, col: usize, defect: f64 },
    #[error("skew form is numerically singular: |det| = {det:.3e}")]
    SingularForm { det: f64 },
    #[error("matrix is not positive-definite: min eigenvalue {lambda_min:.3e}")]
    NotPositiveDefinite { lambda_min: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid deformation parameters: {0}")]
    InvalidParams(String),
    #[error("invalid map parameter lambda = {0}: must be positive and finite")]
    InvalidLambda(f64),
    #[error("invalid gain G = {0}: must be positive and finite")]
    InvalidGain(f64),
    #[error("evolution produced a non-finite coefficient")]
    NonFiniteResult,
    #[error("output vector is not a linear model: {0}")]
    NonLinearModel(String),
    #[error("negative diagonal entry at index {index}: {value:.3e}")]
    NegativeDiagonal { index: usize, value: f64 },
    #[error("negative input: {name} = {value}")]
    NegativeInput { name: &'static str, value: f64 },
    #[error("invalid sweep range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
