//! Checks the high-frequency effective Hamiltonian against exact one-period
//! time evolution.
//!
//! The rotating-frame Hamiltonian, whose drive enters only through bounded
//! Peierls phases on the bonds, is integrated over one period with midpoint
//! exponential steps. The eigenvalues `u_j` of the resulting propagator give
//! quasienergies `i ln(u_j) / T`, which are matched one-to-one against the
//! effective Hamiltonian's spectrum.

use fqc_core::{DriveConfig, LatticeConfig, ModelSpec, C64};
use fqc_hamiltonian::{build_real_space, build_rotating_frame, HamiltonianError};
use fqc_numerics::{eig_dense, expm_multiply_step, DenseComplexMatrix, NumericsError};
use std::f64::consts::PI;
use thiserror::Error;

/// Smallest accepted number of time steps per period.
pub const MIN_STEPS: usize = 256;
/// Largest accepted `||H_r||_1 * dt`.
pub const MAX_NORM_DT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FloquetError {
    #[error("StepTooLarge: ||H_r|| * dt = {norm_dt} exceeds {MAX_NORM_DT} with {n_steps} steps")]
    StepTooLarge { norm_dt: f64, n_steps: usize },
    #[error("TooFewSteps: {n_steps} steps per period, at least {MIN_STEPS} required")]
    TooFewSteps { n_steps: usize },
    #[error("dimension mismatch: propagator is {propagator}x{propagator}, effective Hamiltonian is {effective}x{effective}")]
    DimensionMismatch { propagator: usize, effective: usize },
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, FloquetError>;

#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorReport {
    /// One-period propagator `U(T)`.
    pub u: DenseComplexMatrix,
    /// Quasienergies with real parts folded into `[-omega/2, omega/2)`.
    pub quasienergies: Vec<C64>,
    /// Spectrum of the effective Hamiltonian.
    pub effective: Vec<C64>,
    /// `matched[j]`: index into `effective` paired with `quasienergies[j]`.
    pub matched: Vec<usize>,
    /// `distances[j] = |quasienergies[j] - effective[matched[j]]|`.
    pub distances: Vec<f64>,
    pub max_distance: f64,
    pub n_steps: usize,
    pub period: f64,
}

/// `||H_r(t)||_1`: the drive only changes bond phases, so the norm is the
/// same at every time.
fn rotating_norm(spec: &ModelSpec, lattice: &LatticeConfig, drive: &DriveConfig) -> Result<(f64, f64)> {
    let omega = drive.omega.ok_or(HamiltonianError::MissingOmega)?;
    let h0 = build_rotating_frame(spec, lattice, drive, 0.0)?.matrix;
    Ok((h0.norm_one(), 2.0 * PI / omega))
}

/// Smallest step count that satisfies both step conditions.
pub fn minimum_steps(spec: &ModelSpec, lattice: &LatticeConfig, drive: &DriveConfig) -> Result<usize> {
    let (norm, period) = rotating_norm(spec, lattice, drive)?;
    let needed = (norm * period / MAX_NORM_DT).ceil() as usize;
    Ok(needed.max(MIN_STEPS))
}

/// `U(T) = prod_{j = n..1} exp(-i H_r(t_j) dt)` with `t_j = (j - 1/2) dt`.
pub fn one_period_propagator(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    n_steps: usize,
) -> Result<DenseComplexMatrix> {
    let (norm, period) = rotating_norm(spec, lattice, drive)?;
    if n_steps < MIN_STEPS {
        return Err(FloquetError::TooFewSteps { n_steps });
    }
    let dt = period / n_steps as f64;
    if norm * dt > MAX_NORM_DT {
        return Err(FloquetError::StepTooLarge { norm_dt: norm * dt, n_steps });
    }
    let mut u = DenseComplexMatrix::identity(lattice.l);
    for j in 1..=n_steps {
        let t = (j as f64 - 0.5) * dt;
        let h = build_rotating_frame(spec, lattice, drive, t)?.matrix;
        u = expm_multiply_step(&h, dt)?.matmul(&u);
    }
    Ok(u)
}

/// Folds `x` into `[-omega/2, omega/2)`.
pub fn fold_quasienergy(x: f64, omega: f64) -> f64 {
    let f = x - omega * (x / omega).round();
    if f >= 0.5 * omega {
        f - omega
    } else if f < -0.5 * omega {
        f + omega
    } else {
        f
    }
}

/// Quasienergies of `u` matched greedily (closest pairs first) to the
/// eigenvalues of `h_eff`.
pub fn compare_quasienergies(u: &DenseComplexMatrix, period: f64, h_eff: &DenseComplexMatrix) -> Result<PropagatorReport> {
    if u.dim() != h_eff.dim() {
        return Err(FloquetError::DimensionMismatch { propagator: u.dim(), effective: h_eff.dim() });
    }
    let omega = 2.0 * PI / period;
    let quasienergies: Vec<C64> = eig_dense(u, false)?
        .values
        .iter()
        .map(|z| {
            let e = C64::new(0.0, 1.0) * z.ln() / period;
            C64::new(fold_quasienergy(e.re, omega), e.im)
        })
        .collect();
    let effective = eig_dense(h_eff, false)?.values;
    let n = quasienergies.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, q) in quasienergies.iter().enumerate() {
        for (j, e) in effective.iter().enumerate() {
            pairs.push(((q - e).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut matched = vec![usize::MAX; n];
    let mut distances = vec![0.0; n];
    let mut taken = vec![false; n];
    let mut remaining = n;
    for (d, i, j) in pairs {
        if remaining == 0 {
            break;
        }
        if matched[i] == usize::MAX && !taken[j] {
            matched[i] = j;
            distances[i] = d;
            taken[j] = true;
            remaining -= 1;
        }
    }
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    Ok(PropagatorReport {
        u: u.clone(),
        quasienergies,
        effective,
        matched,
        distances,
        max_distance,
        n_steps: 0,
        period,
    })
}

/// Propagates one period and compares against the effective Hamiltonian
/// built on the same lattice.
pub fn validate_high_frequency(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    n_steps: usize,
) -> Result<PropagatorReport> {
    let u = one_period_propagator(spec, lattice, drive, n_steps)?;
    let (_, period) = rotating_norm(spec, lattice, drive)?;
    let h_eff = build_real_space(spec, lattice, drive)?.matrix;
    let mut report = compare_quasienergies(&u, period, &h_eff)?;
    report.n_steps = n_steps;
    Ok(report)
}

/// `||U^H U - I||_F`.
pub fn unitarity_defect(u: &DenseComplexMatrix) -> f64 {
    u.conj_transpose().matmul(u).sub(&DenseComplexMatrix::identity(u.dim())).norm_fro()
}
