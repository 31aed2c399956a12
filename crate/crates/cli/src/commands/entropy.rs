use std::path::PathBuf;

use qbm_core::boltzmann::{kl_divergence, ProbabilityDistribution};
use qbm_core::kernel::{commutator, eig_hermitian};
use qbm_core::qstate::{quantum_relative_entropy, DensityMatrix};
use serde::Serialize;
use serde_json::Value;

use super::{extended, load_density};
use crate::error::CliError;
use crate::report::RunReport;

/// Largest commutator entry at which two states count as commuting.
pub const COMMUTING_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct EntropyArgs {
    pub rho: PathBuf,
    pub sigma: PathBuf,
    pub seed: u64,
}

#[derive(Serialize)]
struct EntropyReport {
    relative_entropy: Value,
    commuting: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical_kl: Option<Value>,
}

/// Weight of `sigma` in the combination used to find a shared eigenbasis.
const MIX_WEIGHT: f64 = 0.577_215_664_901_532_9;

/// Populations of both states in a basis that diagonalizes them together.
/// A generic combination of two commuting Hermitian matrices has an
/// eigenbasis shared by both.
fn joint_populations(rho: &DensityMatrix, sigma: &DensityMatrix) -> qbm_core::Result<(Vec<f64>, Vec<f64>)> {
    let mix = rho.matrix() + &sigma.matrix().scale_real(MIX_WEIGHT);
    let basis = eig_hermitian(&mix)?.basis;
    let pops = |m: &DensityMatrix| m.matrix().conjugate_by(&basis).diagonal().iter().map(|z| z.re.max(0.0)).collect();
    Ok((pops(rho), pops(sigma)))
}

pub fn cmd_entropy(args: &EntropyArgs) -> Result<RunReport, CliError> {
    let (rho, rho_digest) = load_density(&args.rho)?;
    let (sigma, sigma_digest) = load_density(&args.sigma)?;
    let core = |e| CliError::invalid_input("entropy", e);
    let s = quantum_relative_entropy(&rho, &sigma).map_err(core)?;
    let commuting = commutator(rho.matrix(), sigma.matrix()).map_err(core)?.max_abs() <= COMMUTING_TOL;
    let classical_kl = if commuting {
        let (p, q) = joint_populations(&rho, &sigma).map_err(core)?;
        let p = ProbabilityDistribution::from_weights(&p).map_err(core)?;
        let q = ProbabilityDistribution::from_weights(&q).map_err(core)?;
        Some(extended(kl_divergence(&p, &q).map_err(core)?))
    } else {
        None
    };
    let report = EntropyReport { relative_entropy: extended(s), commuting, classical_kl };
    RunReport::new("entropy", vec![rho_digest, sigma_digest], report, args.seed)
}
