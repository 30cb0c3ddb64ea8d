use crate::{CoreError, LatticeConfig, C64};
use fqc_numerics::bessel_j0;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Magnitude below which a potential denominator counts as a pole.
const POLE_TOLERANCE: f64 = 1e-12;

/// Relative size below which a dressed hopping is exactly zero: `J0` is
/// only accurate to this level, so smaller values are pure rounding.
pub const HOPPING_ZERO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelId {
    /// Complex-phase AAH chain: `V e^{-i 2 pi alpha n}`.
    M1,
    /// AAH chain with imaginary phase shift: `V cos(2 pi alpha n + i gamma)`.
    M2,
    /// Nonreciprocal AAH chain (`J e^{+-gamma}` hoppings) with `V cos(2 pi alpha n)`.
    M3,
    /// Non-Hermitian Maryland chain: `V tan(pi alpha n + i gamma)`.
    M4,
    /// Mobility-edge chain: `V / (1 - eta e^{i 2 pi alpha n})`.
    M5,
}

impl ModelId {
    pub const ALL: [ModelId; 5] = [ModelId::M1, ModelId::M2, ModelId::M3, ModelId::M4, ModelId::M5];

    pub fn uses_gamma(self) -> bool {
        matches!(self, ModelId::M2 | ModelId::M3 | ModelId::M4)
    }

    pub fn uses_eta(self) -> bool {
        self == ModelId::M5
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ModelId {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "M1" => Ok(ModelId::M1),
            "M2" => Ok(ModelId::M2),
            "M3" => Ok(ModelId::M3),
            "M4" => Ok(ModelId::M4),
            "M5" => Ok(ModelId::M5),
            _ => Err(CoreError::UnknownModel(s.to_string())),
        }
    }
}

/// Non-fatal observations about a parameter set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Warning {
    /// `J = 0`: the Hamiltonian is purely diagonal.
    ZeroHopping,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ZeroHopping => write!(f, "J = 0: Hamiltonian is purely diagonal"),
        }
    }
}

/// A model family with its physical parameters. Parameters a model does not
/// use must be zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelId,
    pub j: f64,
    pub v: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl ModelSpec {
    pub fn new(model: ModelId, j: f64, v: f64, gamma: f64, eta: f64) -> Self {
        Self { model, j, v, gamma, eta }
    }

    pub fn m1(j: f64, v: f64) -> Self {
        Self::new(ModelId::M1, j, v, 0.0, 0.0)
    }

    pub fn m2(j: f64, v: f64, gamma: f64) -> Self {
        Self::new(ModelId::M2, j, v, gamma, 0.0)
    }

    pub fn m3(j: f64, v: f64, gamma: f64) -> Self {
        Self::new(ModelId::M3, j, v, gamma, 0.0)
    }

    pub fn m4(j: f64, v: f64, gamma: f64) -> Self {
        Self::new(ModelId::M4, j, v, gamma, 0.0)
    }

    pub fn m5(j: f64, v: f64, eta: f64) -> Self {
        Self::new(ModelId::M5, j, v, 0.0, eta)
    }

    /// Checks the invariants; returns non-fatal warnings on success.
    pub fn validate(&self) -> Result<Vec<Warning>, CoreError> {
        for (name, x) in [("J", self.j), ("V", self.v), ("gamma", self.gamma), ("eta", self.eta)] {
            if !x.is_finite() {
                return Err(CoreError::NonFinite(name));
            }
        }
        if !self.model.uses_gamma() && self.gamma != 0.0 {
            return Err(CoreError::UnusedParameter { model: self.model, name: "gamma" });
        }
        if !self.model.uses_eta() && self.eta != 0.0 {
            return Err(CoreError::UnusedParameter { model: self.model, name: "eta" });
        }
        if self.model == ModelId::M5 && !(self.eta > 0.0 && self.eta != 1.0) {
            return Err(CoreError::InvalidEta(self.eta));
        }
        let mut warnings = Vec::new();
        if self.j == 0.0 {
            warnings.push(Warning::ZeroHopping);
        }
        Ok(warnings)
    }

    /// Potential at quasiperiodic angle `phi = 2 pi alpha n` (reduced), with
    /// an extra real `shift` added to the model's natural argument: the full
    /// angle for M1/M2/M3/M5 and the half angle `pi alpha n` for M4.
    ///
    /// Poles are reported with site index 0; [`onsite_potential`] fills in
    /// the actual site.
    pub fn potential_at_angle(&self, phi: f64, shift: f64) -> Result<C64, CoreError> {
        let v = self.v;
        let pole = |magnitude| CoreError::SingularPotential { site: 0, magnitude };
        Ok(match self.model {
            ModelId::M1 => v * C64::from_polar(1.0, -(phi + shift)),
            ModelId::M2 => v * C64::new(phi + shift, self.gamma).cos(),
            ModelId::M3 => C64::new(v * (phi + shift).cos(), 0.0),
            ModelId::M4 => {
                let x = 0.5 * phi + shift;
                let y = self.gamma;
                // |cos(x + i y)|^2 = cos^2 x + sinh^2 y
                let c = (x.cos().powi(2) + y.sinh().powi(2)).sqrt();
                if c < POLE_TOLERANCE {
                    return Err(pole(c));
                }
                // tan(x + i y) = (sin 2x + i sinh 2y) / (cos 2x + cosh 2y)
                let d = (2.0 * x).cos() + (2.0 * y).cosh();
                v * C64::new((2.0 * x).sin() / d, (2.0 * y).sinh() / d)
            }
            ModelId::M5 => {
                let denom = C64::new(1.0, 0.0) - self.eta * C64::from_polar(1.0, phi + shift);
                if denom.norm() < POLE_TOLERANCE {
                    return Err(pole(denom.norm()));
                }
                v / denom
            }
        })
    }

    /// Bessel-dressed hopping `J J0(K/omega)` for this model.
    pub fn dressed_hopping(&self, k_over_omega: f64) -> f64 {
        effective_hopping(self.j, k_over_omega)
    }
}

/// Photon-dressed hopping amplitude `J J0(K/omega)`, snapped to exactly
/// zero within [`HOPPING_ZERO_TOLERANCE`] of a Bessel zero.
pub fn effective_hopping(j: f64, k_over_w: f64) -> f64 {
    let j0 = bessel_j0(k_over_w);
    if j0.abs() <= HOPPING_ZERO_TOLERANCE {
        0.0
    } else {
        j * j0
    }
}

/// Onsite potential `V_n` at site `n` (1-based).
pub fn onsite_potential(spec: &ModelSpec, lattice: &LatticeConfig, n: usize) -> Result<C64, CoreError> {
    potential_shifted(spec, lattice, n, 0.0)
}

/// Onsite potential with an extra real shift of the model's argument (used
/// by twisted boundaries).
pub(crate) fn potential_shifted(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    n: usize,
    shift: f64,
) -> Result<C64, CoreError> {
    if n == 0 || n > lattice.l {
        return Err(CoreError::SiteOutOfRange { site: n, len: lattice.l });
    }
    spec.potential_at_angle(lattice.angle(n), shift).map_err(|e| match e {
        CoreError::SingularPotential { magnitude, .. } => CoreError::SingularPotential { site: n, magnitude },
        other => other,
    })
}

impl ModelSpec {
    /// `V_n` with the twist-induced argument shift applied.
    pub fn onsite_potential_shifted(&self, lattice: &LatticeConfig, n: usize, shift: f64) -> Result<C64, CoreError> {
        potential_shifted(self, lattice, n, shift)
    }
}
