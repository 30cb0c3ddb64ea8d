//! Spectral diagnostics for the driven quasicrystal chains: inverse
//! participation ratios, closed-form and transfer-matrix Lyapunov exponents,
//! the Maryland-type (M4) transition points and quasienergy curves, the M5
//! mobility edge, and phase classification with an IPR cross-check.

mod classify;
mod error;
mod ipr;
mod lyapunov;
mod m4;
mod report;

pub use classify::{classify_phase, m5_sign_sum, phase_from_iprs, Classification, ClassificationConflict, Phase};
pub use error::ObservablesError;
pub use ipr::{ipr, ipr_threshold, IPR_THRESHOLD_FACTOR};
pub use lyapunov::{
    lyapunov_analytic, lyapunov_transfer_matrix, lyapunov_transfer_matrix_from, MIN_TRANSFER_SITES,
    RENORMALIZE_EVERY, SATURATION_EPSILON,
};
pub use m4::{m4_boundaries, m4_quasienergy_curves, mobility_edge_m5, M4Boundaries, M4Branch};
pub use report::{spectrum_report, SpectrumReport};

pub type Result<T> = std::result::Result<T, ObservablesError>;

/// Dressed hopping magnitudes below this fraction of |J| count as zero.
pub(crate) const HOPPING_FLOOR: f64 = 1e-12;

/// `J J0(K/omega)`, or `HoppingZero` (with the saturated exponent) when the
/// drive has dressed it away.
pub(crate) fn nonzero_hopping(spec: &fqc_core::ModelSpec, drive: &fqc_core::DriveConfig) -> Result<f64> {
    let t = spec.dressed_hopping(drive.k_over_omega);
    if t.abs() <= HOPPING_FLOOR * spec.j.abs() || t == 0.0 {
        return Err(ObservablesError::HoppingZero { saturated: (spec.v.abs() / SATURATION_EPSILON).ln() });
    }
    Ok(t)
}
