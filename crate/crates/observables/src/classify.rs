use crate::{ipr_threshold, m4_boundaries, mobility_edge_m5, SpectrumReport};
use fqc_core::{DriveConfig, ModelId, ModelSpec};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Extended,
    MobilityEdge,
    Localized,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Extended => "extended",
            Phase::MobilityEdge => "mobility_edge",
            Phase::Localized => "localized",
        })
    }
}

/// The analytic prediction disagrees with the IPR-threshold reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassificationConflict {
    pub predicted: Phase,
    pub from_iprs: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub phase: Phase,
    pub conflict: Option<ClassificationConflict>,
    /// M5 only: `sign(E_c - max Re E) + sign(E_c - min Re E)` (2, 0 or -2).
    pub sign_sum: Option<i32>,
}

/// Phase implied by the IPRs alone: all at most `10/L` is extended, all
/// above is localized, a mixture is a mobility-edge phase.
pub fn phase_from_iprs(iprs: &[f64]) -> Option<Phase> {
    if iprs.is_empty() {
        return None;
    }
    let thr = ipr_threshold(iprs.len());
    let localized = iprs.iter().filter(|&&p| p > thr).count();
    Some(match localized {
        0 => Phase::Extended,
        n if n == iprs.len() => Phase::Localized,
        _ => Phase::MobilityEdge,
    })
}

/// `sign(E_c - E_r^max) + sign(E_c - E_r^min)`.
pub fn m5_sign_sum(e_c: f64, report: &SpectrumReport) -> i32 {
    let (lo, hi) = report.real_range();
    let sign = |x: f64| if x > 0.0 { 1 } else if x < 0.0 { -1 } else { 0 };
    sign(e_c - hi) + sign(e_c - lo)
}

/// Phase from the model's analytic condition (M5: from the spectrum's real
/// range against `E_c`), cross-checked against the IPRs when present.
pub fn classify_phase(spec: &ModelSpec, drive: &DriveConfig, report: &SpectrumReport) -> Classification {
    let t = spec.dressed_hopping(drive.k_over_omega).abs();
    let (v, g) = (spec.v.abs(), spec.gamma.abs());
    let by_rule = |extended: bool| if extended { Phase::Extended } else { Phase::Localized };
    let mut sign_sum = None;
    let phase = match spec.model {
        ModelId::M1 => by_rule(v < t),
        ModelId::M2 => by_rule(v * g.exp() < 2.0 * t),
        ModelId::M3 => by_rule(v < 2.0 * t * g.exp()),
        ModelId::M4 => match m4_boundaries(spec, drive) {
            Ok(b) if g > b.gamma2 => Phase::Extended,
            Ok(b) if g > b.gamma1 => Phase::MobilityEdge,
            _ => Phase::Localized,
        },
        ModelId::M5 => match mobility_edge_m5(spec, drive) {
            Ok(e_c) => {
                let s = m5_sign_sum(e_c, report);
                sign_sum = Some(s);
                match s {
                    s if s > 0 => Phase::Extended,
                    s if s < 0 => Phase::Localized,
                    _ => Phase::MobilityEdge,
                }
            }
            Err(_) => Phase::Localized,
        },
    };
    let conflict = phase_from_iprs(&report.iprs)
        .filter(|&p| p != phase)
        .map(|from_iprs| ClassificationConflict { predicted: phase, from_iprs });
    Classification { phase, conflict, sign_sum }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ipr_rule() {
        assert_eq!(phase_from_iprs(&[]), None);
        assert_eq!(phase_from_iprs(&[0.01; 100]), Some(Phase::Extended));
        assert_eq!(phase_from_iprs(&[0.5; 100]), Some(Phase::Localized));
        let mut mixed = vec![0.01; 100];
        mixed[0] = 0.9;
        assert_eq!(phase_from_iprs(&mixed), Some(Phase::MobilityEdge));
    }
}
