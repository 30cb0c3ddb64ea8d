//! Spectral winding numbers of twisted-boundary Hamiltonian families.
//!
//! For a closed loop of Hamiltonians `H(theta)` and a base energy `E_b`, the
//! winding number counts how often `det[H(theta) - E_b]` encircles the
//! origin: the unwrapped change of its phase divided by `2 pi`. Phases come
//! from an LU factorization at each grid point; the grid is doubled until
//! every step is below `pi/2` and the total is within 0.05 of an integer.
//!
//! Loops: M1 twists the wrap entry of its momentum-space matrix, M2/M4/M5
//! shift the potential argument by `theta/L`, and M3 twists the real-space
//! corners. `theta` covers `[0, 2 pi)`, except M4 whose tangent potential
//! closes the loop after `[0, pi)`.

use fqc_core::{Boundary, DriveConfig, LatticeConfig, ModelId, ModelSpec, C64};
use fqc_hamiltonian::{build_momentum_space, build_real_space, HamiltonianError};
use fqc_numerics::{eig_dense, DenseComplexMatrix, LuFactorization, NumericsError};
use fqc_observables::{mobility_edge_m5, ObservablesError};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Distance below which a base energy counts as lying on the spectrum.
pub const ON_SPECTRUM_TOLERANCE: f64 = 1e-8;
/// Relative upward offset applied to the two M4 base energies.
pub const M4_BASE_OFFSET: f64 = 1e-4;
/// Default grid size and refinement cap.
pub const DEFAULT_N_THETA: usize = 256;
pub const MAX_N_THETA: usize = 4096;
const MIN_N_THETA: usize = 64;
/// Largest accepted phase change between neighbouring grid points.
const MAX_STEP: f64 = PI / 2.0;
/// Largest accepted distance of the total from an integer.
const MAX_RESIDUAL: f64 = 0.05;
/// Below this singular-value estimate the spectrum is checked explicitly.
const SCREEN_SIGMA: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WindingError {
    #[error("BaseOnSpectrum: base {base} is within {distance:e} of an eigenvalue at theta = {theta}")]
    BaseOnSpectrum { base: C64, theta: f64, distance: f64 },
    #[error("NonIntegerWinding: total {value} after refining to {n_theta} points (max step {max_step})")]
    NonIntegerWinding { value: f64, n_theta: usize, max_step: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Observables(#[from] ObservablesError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, WindingError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingOptions {
    /// Initial number of grid points on the twist loop (at least 64).
    pub n_theta: usize,
    /// Refinement cap for adaptive doubling.
    pub max_n_theta: usize,
    /// Use a real-space corner twist for M1 instead of the momentum-space
    /// wrap twist (experimental; not guaranteed to give the same integer).
    pub m1_real_space_twist: bool,
}

impl Default for WindingOptions {
    fn default() -> Self {
        Self { n_theta: DEFAULT_N_THETA, max_n_theta: MAX_N_THETA, m1_real_space_twist: false }
    }
}

impl WindingOptions {
    pub fn with_n_theta(mut self, n_theta: usize) -> Self {
        self.n_theta = n_theta;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindingResult {
    pub model: Option<ModelId>,
    pub base_energies: Vec<C64>,
    pub windings: Vec<i64>,
    /// Grid size actually used (after any refinement).
    pub n_theta: usize,
    /// Largest phase change between neighbouring grid points, over all bases.
    pub max_phase_step: f64,
}

/// Length of the twist loop: `pi` for M4, `2 pi` otherwise.
pub fn theta_period(model: ModelId) -> f64 {
    if model == ModelId::M4 {
        PI
    } else {
        2.0 * PI
    }
}

/// The model's twisted Hamiltonian at angle `theta`.
pub fn twisted_hamiltonian(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    theta: f64,
    opts: &WindingOptions,
) -> Result<DenseComplexMatrix> {
    let lat = lattice.with_boundary(Boundary::Twisted(theta));
    let build = if spec.model == ModelId::M1 && !opts.m1_real_space_twist {
        build_momentum_space(spec, &lat, drive)?
    } else {
        build_real_space(spec, &lat, drive)?
    };
    Ok(build.matrix)
}

/// Winding of `det[family(theta) - base]` over `theta in [0, period)`, for
/// each base energy, with adaptive grid refinement.
pub fn winding_for_family<F>(family: &F, period: f64, bases: &[C64], opts: &WindingOptions) -> Result<WindingResult>
where
    F: Fn(f64) -> Result<DenseComplexMatrix> + Sync,
{
    if opts.n_theta < MIN_N_THETA {
        return Err(WindingError::InvalidInput(format!("n_theta must be >= {MIN_N_THETA}, got {}", opts.n_theta)));
    }
    if bases.is_empty() {
        return Ok(WindingResult {
            model: None,
            base_energies: Vec::new(),
            windings: Vec::new(),
            n_theta: opts.n_theta,
            max_phase_step: 0.0,
        });
    }
    let mut n = opts.n_theta;
    // phases[k][b]: arg det at theta_k = k * period / n for base b.
    let mut phases = sample_phases(family, period, bases, n, 0, 1)?;
    loop {
        let (totals, max_step) = unwrap_totals(&phases, bases.len());
        let values: Vec<f64> = totals.iter().map(|t| t / (2.0 * PI)).collect();
        let worst_residual = values.iter().map(|w| (w - w.round()).abs()).fold(0.0, f64::max);
        if max_step < MAX_STEP && worst_residual < MAX_RESIDUAL {
            return Ok(WindingResult {
                model: None,
                base_energies: bases.to_vec(),
                windings: values.iter().map(|w| w.round() as i64).collect(),
                n_theta: n,
                max_phase_step: max_step,
            });
        }
        if 2 * n > opts.max_n_theta.max(opts.n_theta) {
            let value = values
                .iter()
                .copied()
                .max_by(|a, b| (a - a.round()).abs().total_cmp(&(b - b.round()).abs()))
                .unwrap_or(f64::NAN);
            return Err(WindingError::NonIntegerWinding { value, n_theta: n, max_step });
        }
        // Refine: new points sit at the midpoints of the current grid.
        let mids = sample_phases(family, period, bases, 2 * n, 1, 2)?;
        let mut merged = Vec::with_capacity(2 * n);
        for (old, new) in phases.into_iter().zip(mids) {
            merged.push(old);
            merged.push(new);
        }
        phases = merged;
        n *= 2;
    }
}

/// Phases at `theta_k = k * period / n` for `k = start, start + step, ...`.
fn sample_phases<F>(family: &F, period: f64, bases: &[C64], n: usize, start: usize, step: usize) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64) -> Result<DenseComplexMatrix> + Sync,
{
    let ks: Vec<usize> = (start..n).step_by(step).collect();
    ks.par_iter()
        .map(|&k| {
            let theta = period * k as f64 / n as f64;
            let h = family(theta)?;
            bases.iter().map(|&base| phase_at(&h, base, theta)).collect()
        })
        .collect()
}

fn phase_at(h: &DenseComplexMatrix, base: C64, theta: f64) -> Result<f64> {
    let on_spectrum = |distance| WindingError::BaseOnSpectrum { base, theta, distance };
    let lu = match LuFactorization::new(&h.shifted(base)) {
        Ok(lu) => lu,
        Err(NumericsError::SingularMatrix { .. }) => return Err(on_spectrum(0.0)),
        Err(e) => return Err(e.into()),
    };
    // Cheap screen: sigma_min bounds the distance to the nearest eigenvalue
    // from below, so only nearly singular shifts need the full spectrum.
    if lu.sigma_min_estimate(2) < SCREEN_SIGMA * h.norm_fro().max(1.0) {
        let eig = eig_dense(h, false)?;
        let distance = eig.values.iter().map(|z| (z - base).norm()).fold(f64::INFINITY, f64::min);
        if distance < ON_SPECTRUM_TOLERANCE {
            return Err(on_spectrum(distance));
        }
    }
    Ok(lu.det_phase_and_log_abs().0)
}

/// Sum of wrapped phase increments around the closed loop, per base, and
/// the largest single increment.
fn unwrap_totals(phases: &[Vec<f64>], n_bases: usize) -> (Vec<f64>, f64) {
    let n = phases.len();
    let mut totals = vec![0.0; n_bases];
    let mut max_step = 0.0_f64;
    for k in 0..n {
        let next = &phases[(k + 1) % n];
        for b in 0..n_bases {
            let mut d = next[b] - phases[k][b];
            d -= 2.0 * PI * (d / (2.0 * PI)).round();
            totals[b] += d;
            max_step = max_step.max(d.abs());
        }
    }
    (totals, max_step)
}

/// Winding numbers of the model's twist loop around each base energy.
pub fn winding_numbers(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    bases: &[C64],
    opts: &WindingOptions,
) -> Result<WindingResult> {
    if lattice.alpha_den as usize != lattice.l {
        return Err(WindingError::InvalidInput(format!(
            "twist loops need q = L (got q = {}, L = {})",
            lattice.alpha_den, lattice.l
        )));
    }
    let family = |theta: f64| twisted_hamiltonian(spec, lattice, drive, theta, opts);
    let mut result = winding_for_family(&family, theta_period(spec.model), bases, opts)?;
    result.model = Some(spec.model);
    Ok(result)
}

/// Winding number around a single base energy.
pub fn winding_number(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    base: C64,
    n_theta: usize,
) -> Result<i64> {
    let opts = WindingOptions::default().with_n_theta(n_theta);
    Ok(winding_numbers(spec, lattice, drive, &[base], &opts)?.windings[0])
}

/// The two M4 base energies `iV` and `2 J J0(K/omega) + iV`, each raised by
/// `M4_BASE_OFFSET * max(1, |E|)` so that they never coincide with the
/// exactly pinned extended eigenvalues.
pub fn m4_bases(spec: &ModelSpec, drive: &DriveConfig) -> [C64; 2] {
    let t = spec.dressed_hopping(drive.k_over_omega);
    [C64::new(0.0, spec.v), C64::new(2.0 * t, spec.v)].map(|e| e + C64::new(0.0, M4_BASE_OFFSET * e.norm().max(1.0)))
}

/// Dual winding pair `(w1, w2)` of M4 around `iV` and `2 J J0 + iV`.
pub fn winding_pair_m4(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    n_theta: usize,
) -> Result<(i64, i64)> {
    if spec.model != ModelId::M4 {
        return Err(WindingError::InvalidInput(format!("M4 winding pair requested for {}", spec.model)));
    }
    let opts = WindingOptions::default().with_n_theta(n_theta);
    let r = winding_numbers(spec, lattice, drive, &m4_bases(spec, drive), &opts)?;
    Ok((r.windings[0], r.windings[1]))
}

/// Default imaginary offset of the M5 base point: `1e-4 * max(1, E_c)`.
pub fn default_m5_offset(e_c: f64) -> f64 {
    1e-4 * e_c.abs().max(1.0)
}

/// M5 winding around `E_c + i offset_im` (default offset when `None`).
pub fn winding_m5(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    offset_im: Option<f64>,
    n_theta: usize,
) -> Result<i64> {
    let e_c = mobility_edge_m5(spec, drive)?;
    let offset = offset_im.unwrap_or_else(|| default_m5_offset(e_c));
    if !(offset > 0.0) {
        return Err(WindingError::InvalidInput(format!("offset_im must be > 0, got {offset}")));
    }
    winding_number(spec, lattice, drive, C64::new(e_c, offset), n_theta)
}
