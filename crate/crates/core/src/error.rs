use crate::ModelId;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("singular potential at site {site}: |denominator| = {magnitude:e}")]
    SingularPotential { site: usize, magnitude: f64 },
    #[error("InvalidEta: eta = {0} (M5 requires 0 < eta and eta != 1)")]
    InvalidEta(f64),
    #[error("parameter `{name}` is not used by model {model} and must be zero")]
    UnusedParameter { model: ModelId, name: &'static str },
    #[error("parameter `{0}` must be finite")]
    NonFinite(&'static str),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid drive: {0}")]
    InvalidDrive(String),
    #[error("site index {site} outside 1..={len}")]
    SiteOutOfRange { site: usize, len: usize },
    #[error("unknown model `{0}` (expected M1..M5)")]
    UnknownModel(String),
}
