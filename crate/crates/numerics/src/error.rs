use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("QR iteration did not converge within {sweeps} sweeps (dim {dim})")]
    NoConvergence { sweeps: usize, dim: usize },
    #[error("matrix is singular: pivot magnitude {pivot:e} at column {column}")]
    SingularMatrix { pivot: f64, column: usize },
    #[error("time step too large: ||H||*dt = {norm_dt} exceeds 1")]
    StepTooLarge { norm_dt: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}
