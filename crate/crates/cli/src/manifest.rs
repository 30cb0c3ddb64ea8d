//! Run manifests: what was computed, from which configuration, and where
//! the results went.

use crate::CliError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub subcommand: String,
    /// SHA-256 of the raw configuration text.
    pub config_digest: String,
    /// Canonical rendering of the parsed configuration.
    pub config: String,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Hex SHA-256 of `text`; depends only on the bytes.
pub fn config_digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(subcommand: &str, config_text: &str, canonical_config: String) -> Self {
        Self {
            schema_version: 1,
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            config_digest: config_digest(config_text),
            config: canonical_config,
            wall_time_s: 0.0,
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::io("serializing manifest", e))?;
        std::fs::write(path, text + "\n").map_err(|e| CliError::io(path.display(), e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_known_text() {
        assert_eq!(config_digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        assert_eq!(config_digest("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
