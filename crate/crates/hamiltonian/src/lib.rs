//! Hamiltonian builders for the driven quasicrystal chains.
//!
//! * Real space: Bessel-dressed nearest-neighbour hopping `J J0(K/omega)`
//!   (nonreciprocal `J e^{-+gamma}` for M3) plus the model's onsite potential,
//!   with open, periodic or twisted closure.
//! * Momentum space (M1-M3 on exact approximants): the Fourier-dual chains in
//!   which the roles of hopping and potential are exchanged.
//! * Rotating frame: the time-dependent Hamiltonian whose hoppings carry the
//!   Peierls phase `f(t) = (K/omega) sin(omega t)`.
//!
//! Twist conventions: M1 twists the wrap entry of the momentum-space matrix
//! by `e^{-i theta}`; M2, M4 and M5 shift the potential argument by
//! `theta / L`; M3 multiplies the real-space corners by `e^{-+i theta}`.

use fqc_core::{Boundary, CoreError, DriveConfig, LatticeConfig, ModelId, ModelSpec, C64};
use fqc_numerics::DenseComplexMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamiltonianError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("model {0} has no momentum-space representation")]
    UnsupportedModel(ModelId),
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("MissingOmega: the drive frequency omega is required")]
    MissingOmega,
}

pub type Result<T> = std::result::Result<T, HamiltonianError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Representation {
    RealSpace,
    MomentumSpace,
    RotatingFrame { t: f64 },
}

/// A built matrix together with everything needed to reproduce it.
#[derive(Debug, Clone)]
pub struct HamiltonianBuild {
    pub matrix: DenseComplexMatrix,
    pub representation: Representation,
    pub spec: ModelSpec,
    pub lattice: LatticeConfig,
    pub drive: DriveConfig,
    pub twist_theta: Option<f64>,
}

fn validate(spec: &ModelSpec, lattice: &LatticeConfig, drive: &DriveConfig) -> Result<()> {
    spec.validate()?;
    lattice.validate()?;
    drive.validate()?;
    Ok(())
}

/// Nearest-neighbour hoppings `(forward, backward)`: `forward` multiplies
/// `c_n^dag c_{n+1}` (entry `[n][n+1]`), `backward` the reverse bond.
fn bond_amplitudes(spec: &ModelSpec, t: f64) -> (C64, C64) {
    match spec.model {
        ModelId::M3 => (C64::new(t * (-spec.gamma).exp(), 0.0), C64::new(t * spec.gamma.exp(), 0.0)),
        _ => (C64::new(t, 0.0), C64::new(t, 0.0)),
    }
}

/// Writes the chain bonds and (for closed boundaries) the wrap bond, with
/// the wrap entries `[1][L]` and `[L][1]` multiplied by `phase_1l` and
/// `phase_l1` respectively.
fn place_bonds(m: &mut DenseComplexMatrix, forward: C64, backward: C64, closed: bool, phase_1l: C64, phase_l1: C64) {
    let l = m.dim();
    for n in 0..l.saturating_sub(1) {
        m[(n, n + 1)] += forward;
        m[(n + 1, n)] += backward;
    }
    if closed && l > 1 {
        m[(l - 1, 0)] += forward * phase_l1;
        m[(0, l - 1)] += backward * phase_1l;
    }
}

/// Argument shift of the potential induced by the boundary twist.
fn potential_shift(spec: &ModelSpec, lattice: &LatticeConfig) -> f64 {
    match (spec.model, lattice.boundary) {
        (ModelId::M2 | ModelId::M4 | ModelId::M5, Boundary::Twisted(theta)) => theta / lattice.l as f64,
        _ => 0.0,
    }
}

fn diagonal(spec: &ModelSpec, lattice: &LatticeConfig) -> Result<Vec<C64>> {
    let shift = potential_shift(spec, lattice);
    (1..=lattice.l)
        .map(|n| spec.onsite_potential_shifted(lattice, n, shift).map_err(Into::into))
        .collect()
}

/// Effective (period-averaged) Hamiltonian in the site basis.
///
/// With a twisted boundary, M3 (and M1, as an experimental variant of its
/// momentum-space twist) multiply the wrap entries `[1][L]` by `e^{-i theta}`
/// and `[L][1]` by `e^{+i theta}`; M2/M4/M5 shift the potential argument.
pub fn build_real_space(spec: &ModelSpec, lattice: &LatticeConfig, drive: &DriveConfig) -> Result<HamiltonianBuild> {
    validate(spec, lattice, drive)?;
    let t = spec.dressed_hopping(drive.k_over_omega);
    let (forward, backward) = bond_amplitudes(spec, t);
    let diag = diagonal(spec, lattice)?;
    let mut m = DenseComplexMatrix::from_diagonal(&diag);
    let (p1l, pl1) = match (spec.model, lattice.boundary) {
        (ModelId::M1 | ModelId::M3, Boundary::Twisted(theta)) => {
            (C64::from_polar(1.0, -theta), C64::from_polar(1.0, theta))
        }
        _ => (C64::new(1.0, 0.0), C64::new(1.0, 0.0)),
    };
    place_bonds(&mut m, forward, backward, lattice.boundary.is_closed(), p1l, pl1);
    Ok(HamiltonianBuild {
        matrix: m,
        representation: Representation::RealSpace,
        spec: *spec,
        lattice: *lattice,
        drive: *drive,
        twist_theta: lattice.boundary.theta(),
    })
}

/// Fourier-dual Hamiltonian of M1, M2 or M3 (requires a closed chain with
/// `q = L`). Twisted boundaries are supported for M1 only, as a phase
/// `e^{-i theta}` on the `[1][L]` wrap entry.
pub fn build_momentum_space(spec: &ModelSpec, lattice: &LatticeConfig, drive: &DriveConfig) -> Result<HamiltonianBuild> {
    validate(spec, lattice, drive)?;
    if matches!(spec.model, ModelId::M4 | ModelId::M5) {
        return Err(HamiltonianError::UnsupportedModel(spec.model));
    }
    match (spec.model, lattice.boundary) {
        (_, Boundary::Open) => {
            return Err(HamiltonianError::InvalidBoundary("momentum space requires a closed chain".into()))
        }
        (ModelId::M2 | ModelId::M3, Boundary::Twisted(_)) => {
            return Err(HamiltonianError::InvalidBoundary(format!(
                "{} twists act on the potential argument; use the real-space builder",
                spec.model
            )))
        }
        _ => {}
    }
    let t = spec.dressed_hopping(drive.k_over_omega);
    let (v, g) = (spec.v, spec.gamma);
    let l = lattice.l;
    let diag: Vec<C64> = (1..=l)
        .map(|n| {
            let phi = lattice.angle(n);
            match spec.model {
                ModelId::M3 => 2.0 * t * C64::new(phi, -g).cos(),
                _ => C64::new(2.0 * t * phi.cos(), 0.0),
            }
        })
        .collect();
    let mut m = DenseComplexMatrix::from_diagonal(&diag);
    // Bond amplitudes: `sub` on [n+1][n] (and the [1][L] wrap), `sup` on
    // [n][n+1] (and the [L][1] wrap).
    let (sub, sup) = match spec.model {
        ModelId::M1 => (C64::new(v, 0.0), C64::new(0.0, 0.0)),
        ModelId::M2 => (C64::new(0.5 * v * g.exp(), 0.0), C64::new(0.5 * v * (-g).exp(), 0.0)),
        _ => (C64::new(0.5 * v, 0.0), C64::new(0.5 * v, 0.0)),
    };
    let wrap_phase = match lattice.boundary {
        Boundary::Twisted(theta) => C64::from_polar(1.0, -theta),
        _ => C64::new(1.0, 0.0),
    };
    place_bonds(&mut m, sup, sub, true, wrap_phase, C64::new(1.0, 0.0));
    Ok(HamiltonianBuild {
        matrix: m,
        representation: Representation::MomentumSpace,
        spec: *spec,
        lattice: *lattice,
        drive: *drive,
        twist_theta: lattice.boundary.theta(),
    })
}

/// Rotating-frame Hamiltonian at time `t`: undressed hoppings with Peierls
/// factors `e^{+i f(t)}` on `[n][n+1]` and `e^{-i f(t)}` on `[n+1][n]`,
/// `f(t) = (K/omega) sin(omega t)`, and the static potential on the diagonal.
pub fn build_rotating_frame(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    t: f64,
) -> Result<HamiltonianBuild> {
    validate(spec, lattice, drive)?;
    let omega = drive.omega.ok_or(HamiltonianError::MissingOmega)?;
    if let Boundary::Twisted(_) = lattice.boundary {
        return Err(HamiltonianError::InvalidBoundary("rotating frame supports open or periodic chains".into()));
    }
    let f = drive.k_over_omega * (omega * t).sin();
    let (forward, backward) = bond_amplitudes(spec, spec.j);
    let diag = diagonal(spec, lattice)?;
    let mut m = DenseComplexMatrix::from_diagonal(&diag);
    let one = C64::new(1.0, 0.0);
    place_bonds(
        &mut m,
        forward * C64::from_polar(1.0, f),
        backward * C64::from_polar(1.0, -f),
        lattice.boundary.is_closed(),
        one,
        one,
    );
    Ok(HamiltonianBuild {
        matrix: m,
        representation: Representation::RotatingFrame { t },
        spec: *spec,
        lattice: *lattice,
        drive: *drive,
        twist_theta: None,
    })
}
