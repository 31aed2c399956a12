//! Subcommand implementations. Each returns a [`RunReport`] and leaves
//! writing it to the caller.

mod anneal;
mod entropy;
mod probe;
mod train;

use std::path::Path;

use qbm_core::boltzmann::BoltzmannMachine;
use qbm_core::qstate::{DensityMatrix, Observable};
use serde_json::Value;

pub use anneal::{cmd_anneal, parse_schedule, AnnealArgs};
pub use entropy::{cmd_entropy, EntropyArgs};
pub use probe::{cmd_prep, cmd_probe, PrepArgs, ProbeArgs};
pub use train::{cmd_train, TrainArgs};

use crate::error::CliError;
use crate::formats::{parse_json, MachineDoc, MatrixDoc};
use crate::report::{read_input, InputDigest};

pub const NO_ADVANTAGE_REASON: &str =
    "observable is proportional to the identity, so every state commutes with it";

fn load_matrix(path: &Path) -> Result<(qbm_core::kernel::ComplexMatrix, InputDigest), CliError> {
    let (text, digest) = read_input(path)?;
    let doc: MatrixDoc = parse_json(&digest.path, &text)?;
    Ok((doc.to_matrix(&digest.path)?, digest))
}

pub(crate) fn load_observable(path: &Path) -> Result<(Observable, InputDigest), CliError> {
    let (m, digest) = load_matrix(path)?;
    let o = Observable::new(m).map_err(|e| CliError::invalid_input(&digest.path, e))?;
    Ok((o, digest))
}

pub(crate) fn load_density(path: &Path) -> Result<(DensityMatrix, InputDigest), CliError> {
    let (m, digest) = load_matrix(path)?;
    let rho = DensityMatrix::new(m).map_err(|e| CliError::invalid_input(&digest.path, e))?;
    Ok((rho, digest))
}

pub(crate) fn load_machine(path: &Path) -> Result<(BoltzmannMachine, InputDigest), CliError> {
    let (text, digest) = read_input(path)?;
    let doc: MachineDoc = parse_json(&digest.path, &text)?;
    Ok((doc.to_machine(&digest.path)?, digest))
}

/// JSON has no infinity; unbounded values are written as the string `"inf"`.
pub(crate) fn extended(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::from("inf")
    } else {
        Value::from(x)
    }
}
