use std::path::PathBuf;

use qbm_core::probe::{optimal_probe, qfi_unitary_encoding, ORACLE_MAX_DIM};
use qbm_core::prep::{prep_circuit, verify_prep};
use qbm_core::qstate::Observable;
use serde::Serialize;
use serde_json::Value;

use super::{extended, load_observable, NO_ADVANTAGE_REASON};
use crate::error::CliError;
use crate::formats::{CircuitDoc, MatrixDoc};
use crate::parallel;
use crate::report::RunReport;

#[derive(Clone, Debug)]
pub struct ProbeArgs {
    pub observable: PathBuf,
    /// Zero skips the brute-force search.
    pub oracle_restarts: usize,
    pub phi: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct PrepArgs {
    pub observable: PathBuf,
    pub phi: f64,
    pub seed: u64,
}

#[derive(Serialize)]
struct SplitEntry {
    position: usize,
    value: f64,
}

#[derive(Serialize)]
struct SplitDoc {
    trace_part: f64,
    positive: Vec<SplitEntry>,
    negative: Vec<SplitEntry>,
    zero_positions: Vec<usize>,
    t: f64,
}

#[derive(Serialize)]
struct ObservableSummary {
    dim: usize,
    eigenvalues: Vec<f64>,
}

#[derive(Serialize)]
struct ProbeReport {
    observable: ObservableSummary,
    split: SplitDoc,
    i_star: usize,
    j_star: usize,
    t_diagonal: Vec<f64>,
    phi: f64,
    c: f64,
    rho_star: MatrixDoc,
    achieved_norm: f64,
    oracle_norm: Option<f64>,
    oracle_restarts: usize,
    qfi: f64,
    cramer_rao: Value,
    circuit: CircuitDoc,
    prep_deviation: f64,
}

#[derive(Serialize)]
struct CircuitReport {
    circuit: CircuitDoc,
    gate_count: usize,
    gate_bound: usize,
    deviation: f64,
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum Outcome<T> {
    #[serde(rename = "quantum_advantage")]
    Ok(T),
    NoQuantumAdvantage { reason: &'static str },
}

/// Runs the full probe pipeline: split, generator, closed-form probe, oracle
/// cross-check, QFI and the preparation circuit with its verification.
pub fn cmd_probe(args: &ProbeArgs) -> Result<RunReport, CliError> {
    let (o, digest) = load_observable(&args.observable)?;
    let outputs = match probe_report(&o, args) {
        Ok(report) => Outcome::Ok(Box::new(report)),
        Err(CliError::Invalid { error: qbm_core::Error::ZeroTraceless, .. }) => {
            Outcome::NoQuantumAdvantage { reason: NO_ADVANTAGE_REASON }
        }
        Err(e) => return Err(e),
    };
    RunReport::new("probe", vec![digest], outputs, args.seed)
}

fn probe_report(o: &Observable, args: &ProbeArgs) -> Result<ProbeReport, CliError> {
    let core = |e| CliError::invalid_input("probe", e);
    let p = optimal_probe(o, args.phi).map_err(core)?;
    let oracle_norm = if args.oracle_restarts > 0 && o.dim() <= ORACLE_MAX_DIM {
        Some(parallel::oracle_max_pure(o, args.oracle_restarts, args.seed).map_err(core)?.norm)
    } else {
        None
    };
    let qfi = qfi_unitary_encoding(&p.rho_star, o).map_err(core)?;
    let circuit = prep_circuit(&p);
    let prep_deviation =
        verify_prep(&circuit.sequence, &p.rho_star_eigen, &circuit.permutation).map_err(core)?;
    let entries = |group: &[(usize, f64)]| {
        group.iter().map(|&(position, value)| SplitEntry { position, value }).collect()
    };
    Ok(ProbeReport {
        observable: ObservableSummary { dim: o.dim(), eigenvalues: p.split.spectrum.clone() },
        split: SplitDoc {
            trace_part: p.split.trace_part,
            positive: entries(&p.split.pos),
            negative: entries(&p.split.neg),
            zero_positions: p.split.zeros.clone(),
            t: p.split.t,
        },
        i_star: p.i_star,
        j_star: p.j_star,
        t_diagonal: p.t_diagonal.clone(),
        phi: p.phi,
        c: p.c,
        rho_star: MatrixDoc::dense(p.rho_star.matrix()),
        achieved_norm: p.achieved_norm,
        oracle_norm,
        oracle_restarts: if oracle_norm.is_some() { args.oracle_restarts } else { 0 },
        qfi: qfi.qfi,
        cramer_rao: extended(qfi.cramer_rao),
        circuit: CircuitDoc::from_circuit(&circuit),
        prep_deviation,
    })
}

/// Emits the preparation circuit alone. The circuit prepares the probe in the
/// eigenbasis of the observable.
pub fn cmd_prep(args: &PrepArgs) -> Result<RunReport, CliError> {
    let (o, digest) = load_observable(&args.observable)?;
    let outputs = match optimal_probe(&o, args.phi) {
        Ok(p) => {
            let circuit = prep_circuit(&p);
            let deviation = verify_prep(&circuit.sequence, &p.rho_star_eigen, &circuit.permutation)
                .map_err(|e| CliError::invalid_input("prep", e))?;
            Outcome::Ok(CircuitReport {
                gate_count: circuit.sequence.gates.len(),
                gate_bound: 2 * circuit.sequence.m + 2,
                circuit: CircuitDoc::from_circuit(&circuit),
                deviation,
            })
        }
        Err(qbm_core::Error::ZeroTraceless) => Outcome::NoQuantumAdvantage { reason: NO_ADVANTAGE_REASON },
        Err(e) => return Err(CliError::invalid_input(&digest.path, e)),
    };
    RunReport::new("prep", vec![digest], outputs, args.seed)
}
