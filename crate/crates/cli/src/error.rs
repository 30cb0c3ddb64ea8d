use fqc_core::CoreError;
use fqc_floquet_validate::FloquetError;
use fqc_hamiltonian::HamiltonianError;
use fqc_observables::ObservablesError;
use fqc_scan::ScanError;
use fqc_winding::WindingError;
use thiserror::Error;

/// Failures of a subcommand, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration could not be read, parsed or validated.
    #[error("config error: {0}")]
    Config(String),
    /// A computation failed; the message names the operation.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Reading inputs or writing outputs failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn io(context: impl std::fmt::Display, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }

    /// Classifies a library error raised while running `operation`.
    pub fn numerical(operation: &str, e: impl Into<LibraryError>) -> Self {
        match e.into() {
            LibraryError::Config(msg) => CliError::Config(format!("{operation}: {msg}")),
            LibraryError::Numerical(msg) => CliError::Numerical(format!("{operation}: {msg}")),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Config(e.to_string())
    }
}

/// A library error already sorted into configuration and numerical causes.
#[derive(Debug)]
pub enum LibraryError {
    Config(String),
    Numerical(String),
}

fn from_core(e: &CoreError) -> LibraryError {
    match e {
        CoreError::SingularPotential { .. } => LibraryError::Numerical(e.to_string()),
        _ => LibraryError::Config(e.to_string()),
    }
}

impl From<HamiltonianError> for LibraryError {
    fn from(e: HamiltonianError) -> Self {
        match &e {
            HamiltonianError::Core(c) => from_core(c),
            HamiltonianError::MissingOmega | HamiltonianError::InvalidBoundary(_) | HamiltonianError::UnsupportedModel(_) => {
                LibraryError::Config(e.to_string())
            }
        }
    }
}

impl From<ObservablesError> for LibraryError {
    fn from(e: ObservablesError) -> Self {
        match e {
            ObservablesError::Core(c) => from_core(&c),
            ObservablesError::Hamiltonian(h) => h.into(),
            ObservablesError::InvalidEta(_)
            | ObservablesError::UnsupportedModel(_)
            | ObservablesError::WrongModel { .. }
            | ObservablesError::MissingEnergy(_)
            | ObservablesError::InvalidInput(_) => LibraryError::Config(e.to_string()),
            other => LibraryError::Numerical(other.to_string()),
        }
    }
}

impl From<WindingError> for LibraryError {
    fn from(e: WindingError) -> Self {
        match e {
            WindingError::Hamiltonian(h) => h.into(),
            WindingError::Observables(o) => o.into(),
            WindingError::InvalidInput(_) => LibraryError::Config(e.to_string()),
            other => LibraryError::Numerical(other.to_string()),
        }
    }
}

impl From<FloquetError> for LibraryError {
    fn from(e: FloquetError) -> Self {
        match e {
            FloquetError::Hamiltonian(h) => h.into(),
            FloquetError::TooFewSteps { .. } => LibraryError::Config(e.to_string()),
            other => LibraryError::Numerical(other.to_string()),
        }
    }
}

impl From<ScanError> for LibraryError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::WorkerPool(_) => LibraryError::Numerical(e.to_string()),
            other => LibraryError::Config(other.to_string()),
        }
    }
}

impl From<fqc_numerics::NumericsError> for LibraryError {
    fn from(e: fqc_numerics::NumericsError) -> Self {
        LibraryError::Numerical(e.to_string())
    }
}
