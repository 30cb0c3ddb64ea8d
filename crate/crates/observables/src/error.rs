use fqc_core::{CoreError, ModelId};
use fqc_hamiltonian::HamiltonianError;
use fqc_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservablesError {
    #[error("ZeroVector: state has zero norm")]
    ZeroVector,
    #[error("HoppingZero: dressed hopping J*J0(K/omega) vanishes (lambda = +inf, saturated value {saturated})")]
    HoppingZero { saturated: f64 },
    #[error("model {0} has no closed form for this quantity")]
    UnsupportedModel(ModelId),
    #[error("model {0} requires an energy argument")]
    MissingEnergy(ModelId),
    #[error("operation requires model {expected}, got {got}")]
    WrongModel { expected: ModelId, got: ModelId },
    #[error("InvalidEta: eta = {0} (mobility edge requires 0 < eta < 1)")]
    InvalidEta(f64),
    #[error("BranchCut: cot(beta + i gamma) is singular at beta = {beta}, gamma = {gamma}")]
    BranchCut { beta: f64, gamma: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
