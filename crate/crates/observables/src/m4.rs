use crate::{nonzero_hopping, ObservablesError, Result};
use fqc_core::{DriveConfig, ModelId, ModelSpec, C64};
use serde::Serialize;

/// Transition points of the non-Hermitian Maryland chain.
///
/// Below `gamma1` every state is localized, above `gamma2` every state is
/// extended, and in between extended and localized states coexist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct M4Boundaries {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Edge of the extended window in the quasimomentum `beta`; present
    /// when its defining square root is real at the model's gamma.
    pub beta0: Option<f64>,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum M4Branch {
    Localized,
    Extended,
}

fn require(spec: &ModelSpec, model: ModelId) -> Result<()> {
    if spec.model != model {
        return Err(ObservablesError::WrongModel { expected: model, got: spec.model });
    }
    Ok(())
}

/// `gamma1 = asinh(|V|/|t|)/2`, `Delta = (2 + (V/t)^2)/2`,
/// `gamma2 = acosh(sqrt(Delta + sqrt(Delta^2 - 1)))/2`, and
/// `beta0 = arccos(cos 2gamma sqrt(1 - V^2/(t sin 2gamma)^2))`.
pub fn m4_boundaries(spec: &ModelSpec, drive: &DriveConfig) -> Result<M4Boundaries> {
    require(spec, ModelId::M4)?;
    let t = nonzero_hopping(spec, drive)?;
    let r = spec.v / t;
    let gamma1 = 0.5 * (spec.v.abs() / t.abs()).asinh();
    let delta = (2.0 + r * r) / 2.0;
    let gamma2 = 0.5 * (delta + (delta * delta - 1.0).max(0.0).sqrt()).sqrt().acosh();
    let g2 = 2.0 * spec.gamma;
    let inner = 1.0 - (spec.v / (t * g2.sin())).powi(2);
    let beta0 = (inner >= 0.0 && g2.sin() != 0.0).then(|| (g2.cos() * inner.sqrt()).clamp(-1.0, 1.0).acos());
    Ok(M4Boundaries { gamma1, gamma2, beta0, delta })
}

/// Limiting quasienergy curves parametrized by `beta`.
///
/// Extended: `2t cos(beta) + iV`, with the imaginary part pinned at `V`.
/// Localized: `+-sqrt((2t cos(beta + i gamma))^2 + V^2 cot^2(beta + i gamma))`,
/// taking the root with `Im E > 0`; when the root is real the sign follows
/// `t cos(beta)` so the curve stays continuous through the crossing.
pub fn m4_quasienergy_curves(spec: &ModelSpec, drive: &DriveConfig, beta: f64, branch: M4Branch) -> Result<C64> {
    require(spec, ModelId::M4)?;
    let t = spec.dressed_hopping(drive.k_over_omega);
    match branch {
        M4Branch::Extended => Ok(C64::new(2.0 * t * beta.cos(), spec.v)),
        M4Branch::Localized => {
            let z = C64::new(beta, spec.gamma);
            let sin = z.sin();
            if sin.norm() < 1e-14 {
                return Err(ObservablesError::BranchCut { beta, gamma: spec.gamma });
            }
            let cot = z.cos() / sin;
            let w = (2.0 * t * z.cos()).powi(2) + spec.v * spec.v * cot * cot;
            let mut e = w.sqrt();
            if e.im.abs() <= 1e-14 * e.norm().max(1.0) {
                if e.re * t * beta.cos() < 0.0 {
                    e = -e;
                }
            } else if e.im < 0.0 {
                e = -e;
            }
            Ok(e)
        }
    }
}

/// Mobility edge of M5: `E_c = |t (eta + 1/eta)|`.
pub fn mobility_edge_m5(spec: &ModelSpec, drive: &DriveConfig) -> Result<f64> {
    require(spec, ModelId::M5)?;
    if !(spec.eta > 0.0 && spec.eta < 1.0) {
        return Err(ObservablesError::InvalidEta(spec.eta));
    }
    let t = spec.dressed_hopping(drive.k_over_omega);
    Ok((t * (spec.eta + 1.0 / spec.eta)).abs())
}
