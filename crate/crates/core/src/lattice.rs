use crate::CoreError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
    /// Periodic closure with a twist angle theta (radians); how the twist
    /// enters the matrix depends on the model.
    Twisted(f64),
}

impl Boundary {
    pub fn is_closed(self) -> bool {
        !matches!(self, Boundary::Open)
    }

    pub fn theta(self) -> Option<f64> {
        match self {
            Boundary::Twisted(t) => Some(t),
            _ => None,
        }
    }
}

/// Chain of `l` sites with rational quasiperiodicity `alpha = alpha_num / alpha_den`.
///
/// Sites are numbered `1..=l`; under closed boundaries site `l` plays the
/// role of site 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub l: usize,
    pub alpha_num: u64,
    pub alpha_den: u64,
    pub boundary: Boundary,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl LatticeConfig {
    pub fn new(l: usize, alpha_num: u64, alpha_den: u64, boundary: Boundary) -> Result<Self, CoreError> {
        let cfg = Self { l, alpha_num, alpha_den, boundary };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Production lattice: L = 610, alpha = 377/610.
    pub fn production(boundary: Boundary) -> Self {
        Self { l: 610, alpha_num: 377, alpha_den: 610, boundary }
    }

    /// Small test lattice: L = 89, alpha = 55/89.
    pub fn test_default(boundary: Boundary) -> Self {
        Self { l: 89, alpha_num: 55, alpha_den: 89, boundary }
    }

    /// Consecutive Fibonacci approximant with `alpha_den = l`, if `l` is a
    /// Fibonacci number >= 2.
    pub fn fibonacci(l: usize, boundary: Boundary) -> Option<Self> {
        let (mut a, mut b) = (1u64, 2u64);
        while (b as usize) < l {
            (a, b) = (b, a + b);
        }
        (b as usize == l).then_some(Self { l, alpha_num: a, alpha_den: b, boundary })
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.l == 0 {
            return Err(CoreError::InvalidLattice("L must be positive".into()));
        }
        if self.alpha_num == 0 || self.alpha_den == 0 {
            return Err(CoreError::InvalidLattice("alpha numerator and denominator must be positive".into()));
        }
        if self.alpha_num >= self.alpha_den {
            return Err(CoreError::InvalidLattice(format!(
                "alpha = {}/{} must satisfy p < q",
                self.alpha_num, self.alpha_den
            )));
        }
        if gcd(self.alpha_num, self.alpha_den) != 1 {
            return Err(CoreError::InvalidLattice(format!(
                "alpha = {}/{} is not in lowest terms",
                self.alpha_num, self.alpha_den
            )));
        }
        if self.boundary.is_closed() && self.alpha_den as usize != self.l {
            return Err(CoreError::InvalidLattice(format!(
                "closed boundaries require q = L (got q = {}, L = {})",
                self.alpha_den, self.l
            )));
        }
        if let Boundary::Twisted(t) = self.boundary {
            if !t.is_finite() {
                return Err(CoreError::NonFinite("theta"));
            }
        }
        Ok(())
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_num as f64 / self.alpha_den as f64
    }

    /// `2 pi alpha n` reduced exactly modulo `2 pi` using integer arithmetic.
    pub fn angle(&self, n: usize) -> f64 {
        2.0 * PI * self.reduced(n) as f64 / self.alpha_den as f64
    }

    /// `pi alpha n` reduced exactly modulo `pi`.
    pub fn half_angle(&self, n: usize) -> f64 {
        PI * self.reduced(n) as f64 / self.alpha_den as f64
    }

    fn reduced(&self, n: usize) -> u64 {
        ((self.alpha_num as u128 * n as u128) % self.alpha_den as u128) as u64
    }

    /// Parse `"p/q"` into integers (no floating-point alpha accepted).
    pub fn parse_alpha(text: &str) -> Result<(u64, u64), CoreError> {
        let bad = || CoreError::InvalidLattice(format!("alpha must be a fraction \"p/q\", got {text:?}"));
        let (p, q) = text.trim().split_once('/').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok((p, q))
    }
}

/// Drive amplitude-to-frequency ratio, plus the frequency itself when the
/// time-dependent problem is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    pub k_over_omega: f64,
    pub omega: Option<f64>,
}

impl DriveConfig {
    pub fn new(k_over_omega: f64) -> Self {
        Self { k_over_omega, omega: None }
    }

    pub fn with_omega(k_over_omega: f64, omega: f64) -> Self {
        Self { k_over_omega, omega: Some(omega) }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if !self.k_over_omega.is_finite() {
            return Err(CoreError::NonFinite("K_over_omega"));
        }
        if self.k_over_omega < 0.0 {
            return Err(CoreError::InvalidDrive("K_over_omega must be >= 0".into()));
        }
        if let Some(w) = self.omega {
            if !(w.is_finite() && w > 0.0) {
                return Err(CoreError::InvalidDrive(format!("omega must be > 0, got {w}")));
            }
        }
        Ok(())
    }

    /// Drive amplitude `K = (K/omega) * omega`, when omega is known.
    pub fn amplitude(&self) -> Option<f64> {
        self.omega.map(|w| self.k_over_omega * w)
    }
}
