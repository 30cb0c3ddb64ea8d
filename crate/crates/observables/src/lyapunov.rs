use crate::{nonzero_hopping, ObservablesError, Result};
use fqc_core::{CoreError, DriveConfig, LatticeConfig, ModelId, ModelSpec, C64};

/// Regularizer used to report a finite stand-in for `lambda = +inf`.
pub const SATURATION_EPSILON: f64 = 1e-15;
/// Transfer-matrix products are renormalized every this many sites.
pub const RENORMALIZE_EVERY: usize = 16;
/// Shortest chain accepted by the transfer-matrix estimator.
pub const MIN_TRANSFER_SITES: usize = 10_000;

/// Closed-form Lyapunov exponent (natural log, per site).
///
/// M1: `ln|V / t|`; M2: `ln|V e^{|gamma|} / 2t|`; M3: `ln|V e^{-|gamma|} / 2t|`
/// with `t = J J0(K/omega)`; these are negative in the extended phase. M4
/// needs the energy and returns
/// `arccosh[(sqrt((2t+E_r)^2 + (V-E_i)^2) + sqrt((2t-E_r)^2 + (V-E_i)^2)) / 4|t|]`,
/// which is zero on extended states. M5 has no closed form.
pub fn lyapunov_analytic(spec: &ModelSpec, drive: &DriveConfig, e: Option<C64>) -> Result<f64> {
    if spec.model == ModelId::M5 {
        return Err(ObservablesError::UnsupportedModel(ModelId::M5));
    }
    if spec.model == ModelId::M4 && e.is_none() {
        return Err(ObservablesError::MissingEnergy(ModelId::M4));
    }
    let t = nonzero_hopping(spec, drive)?;
    let (v, g) = (spec.v, spec.gamma.abs());
    Ok(match spec.model {
        ModelId::M1 => (v / t).abs().ln(),
        ModelId::M2 => (v * g.exp() / (2.0 * t)).abs().ln(),
        ModelId::M3 => (v * (-g).exp() / (2.0 * t)).abs().ln(),
        _ => {
            let e = e.unwrap_or_default();
            let a = (2.0 * t + e.re).hypot(v - e.im);
            let b = (2.0 * t - e.re).hypot(v - e.im);
            // Rounding can push the argument a hair below 1 at the band.
            ((a + b) / (4.0 * t.abs())).max(1.0).acosh()
        }
    })
}

/// Transfer-matrix Lyapunov exponent at energy `e` over `n_sites` sites of
/// the quasiperiodic chain described by `lattice` (only alpha is used).
///
/// Iterates `psi_{n+1} = ((E - V_n)/t) psi_n - psi_{n-1}` from a fixed
/// initial vector, renormalizing every [`RENORMALIZE_EVERY`] sites. M3 is
/// evaluated in the symmetric gauge (hopping `J J0`, potential `V cos`) and
/// shifted by `-|gamma|`, the imbalance of its nonreciprocal hoppings.
pub fn lyapunov_transfer_matrix(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    e: C64,
    n_sites: usize,
) -> Result<f64> {
    lyapunov_transfer_matrix_from(spec, lattice, drive, e, n_sites, [C64::new(1.0, 0.0), C64::new(0.3, 0.1)])
}

/// As [`lyapunov_transfer_matrix`], starting from `(psi_1, psi_0) = initial`.
pub fn lyapunov_transfer_matrix_from(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    e: C64,
    n_sites: usize,
    initial: [C64; 2],
) -> Result<f64> {
    spec.validate()?;
    drive.validate()?;
    if n_sites < MIN_TRANSFER_SITES {
        return Err(ObservablesError::InvalidInput(format!(
            "transfer-matrix chains need at least {MIN_TRANSFER_SITES} sites, got {n_sites}"
        )));
    }
    let t = nonzero_hopping(spec, drive)?;
    let (potential_spec, shift) = match spec.model {
        ModelId::M3 => (ModelSpec { gamma: 0.0, ..*spec }, -spec.gamma.abs()),
        _ => (*spec, 0.0),
    };
    let inv_t = 1.0 / t;
    let (mut a, mut b) = (initial[0], initial[1]);
    let start = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if !(start > 0.0) {
        return Err(ObservablesError::ZeroVector);
    }
    a /= start;
    b /= start;
    let mut log_growth = 0.0;
    for n in 1..=n_sites {
        let vn = potential_spec.potential_at_angle(lattice.angle(n), 0.0).map_err(|err| match err {
            CoreError::SingularPotential { magnitude, .. } => CoreError::SingularPotential { site: n, magnitude },
            other => other,
        })?;
        let next = (e - vn) * inv_t * a - b;
        b = a;
        a = next;
        if n % RENORMALIZE_EVERY == 0 || n == n_sites {
            let s = (a.norm_sqr() + b.norm_sqr()).sqrt();
            log_growth += s.ln();
            a /= s;
            b /= s;
        }
    }
    Ok(log_growth / n_sites as f64 + shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fqc_core::Boundary;

    #[test]
    fn initial_vector_independence() {
        let lat = LatticeConfig::new(832_040, 514_229, 832_040, Boundary::Open).unwrap();
        let spec = ModelSpec::m1(1.0, 1.7);
        let e = 2.0 * C64::new(1.1, 1.7f64.ln()).cos();
        let d = DriveConfig::new(0.0);
        let base = lyapunov_transfer_matrix(&spec, &lat, &d, e, 50_000).unwrap();
        for seed in 0..5 {
            let s = seed as f64;
            let init = [C64::new(s.cos(), 0.2 * s), C64::new(1.0 - 0.1 * s, s.sin())];
            let other = lyapunov_transfer_matrix_from(&spec, &lat, &d, e, 50_000, init).unwrap();
            assert!((other - base).abs() < 2e-3);
        }
    }

    #[test]
    fn short_chains_rejected() {
        let lat = LatticeConfig::new(89, 55, 89, Boundary::Open).unwrap();
        let r = lyapunov_transfer_matrix(&ModelSpec::m1(1.0, 2.0), &lat, &DriveConfig::new(0.0), C64::new(0.0, 0.0), 100);
        assert!(matches!(r, Err(ObservablesError::InvalidInput(_))));
    }
}
