//! Self-contained numerical kernels for the driven quasicrystal toolkit.
//!
//! Everything here is dense and pure: a row-major complex matrix type, a
//! non-Hermitian eigensolver (balancing, Householder Hessenberg reduction,
//! shifted complex QR), an LU determinant with phase bookkeeping, a scaled
//! Taylor exponential for time stepping, and the Bessel function J0.

mod bessel;
mod eigen;
mod error;
mod expm;
mod lu;
mod matrix;

pub use bessel::bessel_j0;
pub use eigen::{eig_dense, EigenDecomposition};
pub use error::NumericsError;
pub use expm::expm_multiply_step;
pub use lu::{det_phase_and_log_abs, LuFactorization};
pub use matrix::DenseComplexMatrix;

/// Complex scalar used throughout (energy units or dimensionless by context).
pub type C64 = num_complex::Complex64;

/// Result alias for the kernels in this crate.
pub type Result<T> = std::result::Result<T, NumericsError>;
