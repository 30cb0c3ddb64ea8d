use crate::{ObservablesError, Result};
use fqc_core::C64;

/// IPR values above `IPR_THRESHOLD_FACTOR / L` count as localized.
pub const IPR_THRESHOLD_FACTOR: f64 = 10.0;

/// Extended/localized discrimination threshold `10 / L`: a uniform state has
/// IPR `1/L`, a localized one stays O(1) as `L` grows.
pub fn ipr_threshold(l: usize) -> f64 {
    IPR_THRESHOLD_FACTOR / l as f64
}

/// Inverse participation ratio `sum |psi_n|^4` of the normalized state.
/// Inputs whose norm deviates from 1 by more than 1e-10 are renormalized.
pub fn ipr(amplitudes: &[C64]) -> Result<f64> {
    let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(ObservablesError::ZeroVector);
    }
    let scale = if (norm2 - 1.0).abs() > 1e-10 { 1.0 / norm2 } else { 1.0 };
    Ok(amplitudes.iter().map(|z| (z.norm_sqr() * scale).powi(2)).sum())
}
