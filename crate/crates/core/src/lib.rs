//! Domain types for periodically driven non-Hermitian quasicrystal chains:
//! the five model families, lattice and drive parameters, the
//! Bessel-dressed hopping amplitude, and the quasiperiodic onsite potentials.

mod error;
mod lattice;
mod model;

pub use error::CoreError;
pub use fqc_numerics::C64;
pub use lattice::{Boundary, DriveConfig, LatticeConfig};
pub use model::{effective_hopping, onsite_potential, ModelId, ModelSpec, Warning, HOPPING_ZERO_TOLERANCE};

/// Complex energy `E = E_r + i E_i`.
pub type ComplexScalar = C64;

/// First zero of J0: the drive ratio at which hopping is fully suppressed.
pub const BESSEL_J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;
