//! Deterministic two-parameter sweeps.
//!
//! Every grid cell builds the effective Hamiltonian for its parameters,
//! diagonalizes it, summarizes the spectrum, labels the phase and optionally
//! computes winding numbers. Cells are independent units of work; results are
//! placed by their row-major index, so the grid does not depend on how many
//! workers computed it.

use fqc_core::{CoreError, DriveConfig, LatticeConfig, ModelId, ModelSpec, C64};
use fqc_hamiltonian::build_real_space;
use fqc_observables::{
    classify_phase, lyapunov_analytic, spectrum_report, ClassificationConflict, ObservablesError, Phase, SpectrumReport,
};
use fqc_winding::{winding_numbers, winding_pair_m4, winding_m5, WindingOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Lyapunov exponents within this distance of zero count as zero.
const LYAPUNOV_ZERO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T> = std::result::Result<T, ScanError>;

/// A parameter that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanParameter {
    V,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "eta")]
    Eta,
    #[serde(rename = "K_over_omega")]
    KOverOmega,
}

impl ScanParameter {
    pub fn name(self) -> &'static str {
        match self {
            ScanParameter::V => "V",
            ScanParameter::Gamma => "gamma",
            ScanParameter::Eta => "eta",
            ScanParameter::KOverOmega => "K_over_omega",
        }
    }

    fn applies_to(self, model: ModelId) -> bool {
        match self {
            ScanParameter::Gamma => model.uses_gamma(),
            ScanParameter::Eta => model.uses_eta(),
            _ => true,
        }
    }

    fn apply(self, spec: &mut ModelSpec, drive: &mut DriveConfig, value: f64) {
        match self {
            ScanParameter::V => spec.v = value,
            ScanParameter::Gamma => spec.gamma = value,
            ScanParameter::Eta => spec.eta = value,
            ScanParameter::KOverOmega => drive.k_over_omega = value,
        }
    }
}

impl fmt::Display for ScanParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanParameter {
    type Err = ScanError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "v" => Ok(ScanParameter::V),
            "gamma" => Ok(ScanParameter::Gamma),
            "eta" => Ok(ScanParameter::Eta),
            "k_over_omega" | "k/omega" | "kw" => Ok(ScanParameter::KOverOmega),
            _ => Err(ScanError::InvalidConfig(format!(
                "unknown scan parameter {s:?} (expected V, gamma, eta or K_over_omega)"
            ))),
        }
    }
}

/// Evenly spaced samples of one parameter, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub parameter: ScanParameter,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl Axis {
    pub fn new(parameter: ScanParameter, min: f64, max: f64, n_points: usize) -> Self {
        Self { parameter, min, max, n_points }
    }

    /// A degenerate axis holding the single value `value`.
    pub fn point(parameter: ScanParameter, value: f64) -> Self {
        Self::new(parameter, value, value, 1)
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n_points <= 1 {
            self.min
        } else if i + 1 == self.n_points {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.n_points - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.value(i)).collect()
    }

    fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(ScanError::InvalidConfig(format!("{} axis bounds must be finite", self.parameter)));
        }
        match self.n_points {
            0 => Err(ScanError::InvalidConfig(format!("{} axis has no points", self.parameter))),
            1 if self.min != self.max => Err(ScanError::InvalidConfig(format!(
                "{} axis needs at least 2 points to span [{}, {}]",
                self.parameter, self.min, self.max
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Parameters held fixed; the swept ones are overwritten per cell.
    pub spec: ModelSpec,
    pub lattice: LatticeConfig,
    /// Drive template (its `k_over_omega` is used unless swept).
    pub drive: DriveConfig,
    pub axis1: Axis,
    pub axis2: Axis,
    /// Compute eigenvectors and IPRs for every cell.
    pub compute_iprs: bool,
    pub compute_winding: bool,
    pub winding_n_theta: usize,
    /// Base energy for M1–M3 windings (M4 and M5 use their own bases).
    pub winding_base: C64,
    /// Imaginary offset of the M5 base point; `None` uses the default.
    pub m5_offset_im: Option<f64>,
}

impl ScanConfig {
    pub fn new(spec: ModelSpec, lattice: LatticeConfig, axis1: Axis, axis2: Axis) -> Self {
        Self {
            spec,
            lattice,
            drive: DriveConfig::new(0.0),
            axis1,
            axis2,
            compute_iprs: true,
            compute_winding: false,
            winding_n_theta: fqc_winding::DEFAULT_N_THETA,
            winding_base: C64::new(0.0, 0.0),
            m5_offset_im: None,
        }
    }

    pub fn with_drive(mut self, drive: DriveConfig) -> Self {
        self.drive = drive;
        self
    }

    pub fn with_winding(mut self, n_theta: usize) -> Self {
        self.compute_winding = true;
        self.winding_n_theta = n_theta;
        self
    }

    /// Skip eigenvectors: only spectra (and windings) are computed.
    pub fn without_iprs(mut self) -> Self {
        self.compute_iprs = false;
        self
    }

    pub fn n_cells(&self) -> usize {
        self.axis1.n_points * self.axis2.n_points
    }

    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        self.axis2.validate()?;
        if self.axis1.parameter == self.axis2.parameter {
            return Err(ScanError::InvalidConfig(format!("both axes sweep {}", self.axis1.parameter)));
        }
        for axis in [&self.axis1, &self.axis2] {
            if !axis.parameter.applies_to(self.spec.model) {
                return Err(CoreError::UnusedParameter { model: self.spec.model, name: axis.parameter.name() }.into());
            }
        }
        self.lattice.validate()?;
        if self.compute_winding && self.winding_n_theta < 64 {
            return Err(ScanError::InvalidConfig(format!("winding n_theta must be >= 64, got {}", self.winding_n_theta)));
        }
        Ok(())
    }

    /// Model and drive parameters of cell `(i1, i2)`.
    pub fn cell_parameters(&self, i1: usize, i2: usize) -> (ModelSpec, DriveConfig) {
        self.parameters_at(self.axis1.value(i1), self.axis2.value(i2))
    }

    /// Model and drive parameters with the swept values set to `(x1, x2)`.
    pub fn parameters_at(&self, x1: f64, x2: f64) -> (ModelSpec, DriveConfig) {
        let mut spec = self.spec;
        let mut drive = self.drive;
        self.axis1.parameter.apply(&mut spec, &mut drive, x1);
        self.axis2.parameter.apply(&mut spec, &mut drive, x2);
        (spec, drive)
    }
}

/// Everything measured at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellRecord {
    pub index1: usize,
    pub index2: usize,
    pub param1: f64,
    pub param2: f64,
    pub max_abs_im: Option<f64>,
    /// Smallest and largest real part of the spectrum.
    pub min_re: Option<f64>,
    pub max_re: Option<f64>,
    pub min_ipr: Option<f64>,
    pub max_ipr: Option<f64>,
    /// Sign of the closed-form Lyapunov exponent: +1 localized, -1 or 0
    /// otherwise; for M4 the largest exponent over the spectrum. M5: none.
    pub lyapunov_sign: Option<i8>,
    pub windings: Option<Vec<i64>>,
    pub phase_label: Option<Phase>,
    /// M5 only: `sign(E_c - max Re E) + sign(E_c - min Re E)`.
    pub sign_sum: Option<i32>,
    pub conflict: Option<ClassificationConflict>,
    /// Failure that prevented the cell from being evaluated.
    pub error: Option<String>,
    /// Failure of the winding computation alone.
    pub winding_error: Option<String>,
}

impl CellRecord {
    fn empty(index1: usize, index2: usize, param1: f64, param2: f64) -> Self {
        Self {
            index1,
            index2,
            param1,
            param2,
            max_abs_im: None,
            min_re: None,
            max_re: None,
            min_ipr: None,
            max_ipr: None,
            lyapunov_sign: None,
            windings: None,
            phase_label: None,
            sign_sum: None,
            conflict: None,
            error: None,
            winding_error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub config: ScanConfig,
    pub n1: usize,
    pub n2: usize,
    /// Row-major: `cells[i1 * n2 + i2]`.
    pub cells: Vec<CellRecord>,
}

impl PhaseGrid {
    pub fn cell(&self, i1: usize, i2: usize) -> &CellRecord {
        &self.cells[i1 * self.n2 + i2]
    }
}

/// Runs the sweep on a dedicated pool of `workers` threads.
pub fn run_scan(config: &ScanConfig, workers: usize) -> Result<PhaseGrid> {
    config.validate()?;
    if workers == 0 {
        return Err(ScanError::InvalidConfig("workers must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ScanError::WorkerPool(e.to_string()))?;
    let (n1, n2) = (config.axis1.n_points, config.axis2.n_points);
    let cells = pool.install(|| (0..n1 * n2).into_par_iter().map(|k| evaluate_cell(config, k / n2, k % n2)).collect());
    Ok(PhaseGrid { config: *config, n1, n2, cells })
}

/// Evaluates a single cell; failures are stored in the record.
pub fn evaluate_cell(config: &ScanConfig, i1: usize, i2: usize) -> CellRecord {
    let (spec, drive) = config.cell_parameters(i1, i2);
    let mut cell = CellRecord::empty(i1, i2, config.axis1.value(i1), config.axis2.value(i2));
    let report = match measure(&spec, &config.lattice, &drive, config.compute_iprs) {
        Ok(r) => r,
        Err(e) => {
            cell.error = Some(e);
            return cell;
        }
    };
    let classification = classify_phase(&spec, &drive, &report);
    let (lo, hi) = report.real_range();
    cell.max_abs_im = Some(report.max_abs_im);
    cell.min_re = Some(lo);
    cell.max_re = Some(hi);
    cell.min_ipr = report.min_ipr;
    cell.max_ipr = report.max_ipr;
    cell.lyapunov_sign = lyapunov_sign(&spec, &drive, &report);
    cell.phase_label = Some(classification.phase);
    cell.sign_sum = classification.sign_sum;
    cell.conflict = classification.conflict;
    if config.compute_winding {
        match windings(config, &spec, &drive) {
            Ok(w) => cell.windings = Some(w),
            Err(e) => cell.winding_error = Some(e),
        }
    }
    cell
}

fn measure(
    spec: &ModelSpec,
    lattice: &LatticeConfig,
    drive: &DriveConfig,
    want_iprs: bool,
) -> std::result::Result<SpectrumReport, String> {
    spec.validate().map_err(|e| e.to_string())?;
    let h = build_real_space(spec, lattice, drive).map_err(|e| e.to_string())?.matrix;
    spectrum_report(&h, want_iprs).map_err(|e| e.to_string())
}

fn sign_of(x: f64) -> i8 {
    if x > LYAPUNOV_ZERO {
        1
    } else if x < -LYAPUNOV_ZERO {
        -1
    } else {
        0
    }
}

fn lyapunov_sign(spec: &ModelSpec, drive: &DriveConfig, report: &SpectrumReport) -> Option<i8> {
    match spec.model {
        ModelId::M5 => None,
        ModelId::M4 => {
            let mut largest = f64::NEG_INFINITY;
            for &e in &report.eigenvalues {
                match lyapunov_analytic(spec, drive, Some(e)) {
                    Ok(l) => largest = largest.max(l),
                    Err(ObservablesError::HoppingZero { .. }) => return Some(1),
                    Err(_) => return None,
                }
            }
            largest.is_finite().then(|| sign_of(largest))
        }
        _ => match lyapunov_analytic(spec, drive, None) {
            Ok(l) => Some(sign_of(l)),
            Err(ObservablesError::HoppingZero { .. }) => Some(1),
            Err(_) => None,
        },
    }
}

fn windings(config: &ScanConfig, spec: &ModelSpec, drive: &DriveConfig) -> std::result::Result<Vec<i64>, String> {
    let opts = WindingOptions::default().with_n_theta(config.winding_n_theta);
    let lattice = &config.lattice;
    let result = match spec.model {
        ModelId::M4 => winding_pair_m4(spec, lattice, drive, opts.n_theta).map(|(a, b)| vec![a, b]),
        ModelId::M5 => winding_m5(spec, lattice, drive, config.m5_offset_im, opts.n_theta).map(|w| vec![w]),
        _ => winding_numbers(spec, lattice, drive, &[config.winding_base], &opts).map(|r| r.windings),
    };
    result.map_err(|e| e.to_string())
}

/// Cells where `observed` and `predicted` disagree although the prediction
/// is constant over the cell's 3x3 neighbourhood, i.e. disagreements farther
/// than one grid cell from the predicted boundary. Grids are row-major
/// `n1 x n2`.
pub fn mismatches_beyond_one_cell(n1: usize, n2: usize, observed: &[bool], predicted: &[bool]) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let k = i * n2 + j;
            if observed[k] == predicted[k] {
                continue;
            }
            let near_boundary = (i.saturating_sub(1)..=(i + 1).min(n1 - 1))
                .flat_map(|a| (j.saturating_sub(1)..=(j + 1).min(n2 - 1)).map(move |b| (a, b)))
                .any(|(a, b)| predicted[a * n2 + b] != predicted[k]);
            if !near_boundary {
                bad.push((i, j));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_endpoints_are_exact() {
        let a = Axis::new(ScanParameter::V, 0.0, 2.0, 41);
        assert_eq!(a.value(0), 0.0);
        assert_eq!(a.value(40), 2.0);
        assert_eq!(a.value(20), 1.0);
        assert_eq!(Axis::point(ScanParameter::Eta, 0.3).values(), vec![0.3]);
    }

    #[test]
    fn parameter_names_round_trip() {
        for p in [ScanParameter::V, ScanParameter::Gamma, ScanParameter::Eta, ScanParameter::KOverOmega] {
            assert_eq!(p.name().parse::<ScanParameter>().unwrap(), p);
        }
        assert!("omega".parse::<ScanParameter>().is_err());
    }

    #[test]
    fn one_cell_tolerance_excuses_neighbours_only() {
        let predicted = [false, false, true, false, false, true, false, false, false];
        let mut observed = predicted;
        observed[1] = true; // next to a predicted-true cell
        observed[6] = true; // far from any predicted change
        assert_eq!(mismatches_beyond_one_cell(3, 3, &observed, &predicted), vec![(2, 0)]);
    }
}
