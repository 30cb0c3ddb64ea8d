//! Run configuration: a TOML file with `model`, `lattice`, `drive` and
//! optional per-subcommand sections.
//!
//! ```toml
//! [model]
//! name = "M1"
//! j = 1.0
//! v = 0.5
//!
//! [lattice]
//! l = 89
//! alpha = "55/89"
//! boundary = "periodic"
//!
//! [drive]
//! k_over_omega = 1.0
//! omega = 20.0
//! ```

use crate::CliError;
use fqc_core::{Boundary, DriveConfig, LatticeConfig, ModelId, ModelSpec, C64};
use fqc_scan::{Axis, ScanConfig, ScanParameter};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_L: usize = 144;
pub const DEFAULT_ALPHA: &str = "89/144";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    #[serde(default)]
    pub lattice: LatticeSection,
    #[serde(default)]
    pub drive: DriveSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<WindingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate: Option<ValidateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lyapunov: Option<LyapunovSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// `M1` … `M5`.
    pub name: String,
    #[serde(alias = "J")]
    pub j: f64,
    #[serde(alias = "V")]
    pub v: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    #[serde(default = "default_l", alias = "L")]
    pub l: usize,
    /// Exact fraction `"p/q"`; defaults to the Fibonacci ratio for `l`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// `open`, `periodic` or `twisted`.
    #[serde(default = "default_boundary")]
    pub boundary: String,
    /// Twist angle for `boundary = "twisted"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

fn default_l() -> usize {
    DEFAULT_L
}

fn default_boundary() -> String {
    "periodic".into()
}

impl Default for LatticeSection {
    fn default() -> Self {
        Self { l: DEFAULT_L, alpha: Some(DEFAULT_ALPHA.into()), boundary: default_boundary(), theta: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    #[serde(default, alias = "K_over_omega")]
    pub k_over_omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    /// `V`, `gamma`, `eta` or `K_over_omega`.
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub axis1: AxisSection,
    pub axis2: AxisSection,
    /// Compute eigenvectors and IPRs per cell.
    #[serde(default = "yes")]
    pub iprs: bool,
    #[serde(default)]
    pub winding: bool,
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    #[serde(default)]
    pub base_re: f64,
    #[serde(default)]
    pub base_im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m5_offset_im: Option<f64>,
    /// Quantities rendered as heatmaps with `--svg`.
    #[serde(default = "default_quantities")]
    pub quantities: Vec<String>,
}

fn yes() -> bool {
    true
}

fn default_n_theta() -> usize {
    fqc_winding::DEFAULT_N_THETA
}

fn default_quantities() -> Vec<String> {
    vec!["max_abs_im".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindingSection {
    #[serde(default)]
    pub base_re: f64,
    #[serde(default)]
    pub base_im: f64,
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m5_offset_im: Option<f64>,
    /// Experimental: twist M1 in real space instead of momentum space.
    #[serde(default)]
    pub m1_real_space_twist: bool,
}

impl Default for WindingSection {
    fn default() -> Self {
        Self { base_re: 0.0, base_im: 0.0, n_theta: default_n_theta(), m5_offset_im: None, m1_real_space_twist: false }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_im: Option<f64>,
    #[serde(default = "default_sites")]
    pub n_sites: usize,
}

fn default_sites() -> usize {
    100_000
}

impl Default for LyapunovSection {
    fn default() -> Self {
        Self { energy_re: None, energy_im: None, n_sites: default_sites() }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim().to_string()))
    }

    /// Reads and parses a config file, returning it with its raw text.
    pub fn load(path: &Path) -> Result<(Self, String), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        Ok((cfg, text))
    }

    /// Canonical TOML rendering; parsing it yields an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let m = &self.model;
        let id: ModelId = m.name.parse()?;
        let spec = ModelSpec::new(id, m.j, m.v, m.gamma, m.eta);
        spec.validate()?;
        Ok(spec)
    }

    pub fn lattice_config(&self) -> Result<LatticeConfig, CliError> {
        let s = &self.lattice;
        let boundary = match (s.boundary.trim().to_ascii_lowercase().as_str(), s.theta) {
            ("open", None) => Boundary::Open,
            ("periodic", None) => Boundary::Periodic,
            ("twisted", Some(theta)) => Boundary::Twisted(theta),
            ("twisted", None) => return Err(CliError::Config("lattice.boundary = \"twisted\" needs lattice.theta".into())),
            ("open" | "periodic", Some(_)) => {
                return Err(CliError::Config("lattice.theta is only valid with boundary = \"twisted\"".into()))
            }
            (other, _) => {
                return Err(CliError::Config(format!(
                    "lattice.boundary must be open, periodic or twisted, got {other:?}"
                )))
            }
        };
        let (p, q) = match &s.alpha {
            Some(a) => LatticeConfig::parse_alpha(a)?,
            None => {
                let fib = LatticeConfig::fibonacci(s.l, boundary).ok_or_else(|| {
                    CliError::Config(format!("lattice.alpha is required: l = {} is not a Fibonacci number", s.l))
                })?;
                (fib.alpha_num, fib.alpha_den)
            }
        };
        Ok(LatticeConfig::new(s.l, p, q, boundary)?)
    }

    pub fn drive_config(&self) -> Result<DriveConfig, CliError> {
        let d = DriveConfig { k_over_omega: self.drive.k_over_omega, omega: self.drive.omega };
        d.validate()?;
        Ok(d)
    }

    pub fn scan_config(&self) -> Result<ScanConfig, CliError> {
        let s = self.scan.as_ref().ok_or_else(|| CliError::Config("missing required section `scan`".into()))?;
        let axis = |a: &AxisSection| -> Result<Axis, CliError> {
            let p: ScanParameter = a.parameter.parse().map_err(|e: fqc_scan::ScanError| CliError::Config(e.to_string()))?;
            Ok(Axis::new(p, a.min, a.max, a.n_points))
        };
        let mut cfg = ScanConfig::new(self.template_spec()?, self.lattice_config()?, axis(&s.axis1)?, axis(&s.axis2)?)
            .with_drive(self.drive_config()?);
        cfg.compute_iprs = s.iprs;
        cfg.compute_winding = s.winding;
        cfg.winding_n_theta = s.n_theta;
        cfg.winding_base = C64::new(s.base_re, s.base_im);
        cfg.m5_offset_im = s.m5_offset_im;
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Model parameters without validation: swept values are replaced per
    /// cell, so e.g. a placeholder `eta` need not be valid on its own.
    fn template_spec(&self) -> Result<ModelSpec, CliError> {
        let m = &self.model;
        Ok(ModelSpec::new(m.name.parse()?, m.j, m.v, m.gamma, m.eta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = RunConfig::parse("[model]\nname = \"M1\"\nj = 1.0\nv = 0.5\n").unwrap();
        let lat = cfg.lattice_config().unwrap();
        assert_eq!((lat.l, lat.alpha_num, lat.alpha_den), (144, 89, 144));
        assert_eq!(cfg.drive_config().unwrap(), DriveConfig::new(0.0));
    }

    #[test]
    fn fibonacci_alpha_is_inferred() {
        let cfg = RunConfig::parse("[model]\nname = \"M2\"\nj = 1\nv = 1\n[lattice]\nl = 89\n").unwrap();
        let lat = cfg.lattice_config().unwrap();
        assert_eq!((lat.alpha_num, lat.alpha_den), (55, 89));
        let bad = RunConfig::parse("[model]\nname = \"M2\"\nj = 1\nv = 1\n[lattice]\nl = 90\n").unwrap();
        assert!(bad.lattice_config().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::parse("[model]\nname = \"M1\"\nj = 1\nv = 1\nfoo = 2\n").unwrap_err();
        assert!(err.to_string().contains("foo"));
    }
}
