//! Command-line front end for driven non-Hermitian quasicrystal models:
//! configuration, subcommands, CSV/JSON serialization and SVG heatmaps.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod manifest;
pub mod svg;

pub use commands::{cmd_lyapunov, cmd_scan, cmd_spectrum, cmd_validate, cmd_winding, grid_csv, Outcome, OutputFormat, Request};
pub use config::RunConfig;
pub use error::CliError;
pub use manifest::{config_digest, RunManifest};

/// Environment variable consulted when `--workers` is not given.
pub const WORKERS_ENV: &str = "FLOQUET_QC_WORKERS";
