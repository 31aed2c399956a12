use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const VERSION: &str = concat!("qbm ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Envelope emitted by every subcommand. `outputs` is deterministic in the
/// input bytes, flags and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub outputs: serde_json::Value,
    pub seed: u64,
    pub versions: String,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<InputDigest>, outputs: impl Serialize, seed: u64) -> Result<Self, CliError> {
        Ok(Self {
            command: command.to_string(),
            inputs,
            outputs: serde_json::to_value(outputs).map_err(|e| CliError::Internal(e.to_string()))?,
            seed,
            versions: VERSION.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report values are finite JSON");
        text.push('\n');
        text
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads an input file as UTF-8 and records its digest.
pub fn read_input(path: &Path) -> Result<(String, InputDigest), CliError> {
    let display = path.display().to_string();
    let bytes = fs::read(path).map_err(|error| CliError::Io { path: display.clone(), error })?;
    let sha256 = digest(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Parse { origin: display.clone(), line: None, message: "file is not UTF-8".into() })?;
    Ok((text, InputDigest { path: display, sha256 }))
}
