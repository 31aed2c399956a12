use std::path::PathBuf;

use qbm_core::boltzmann::{fisher_metric, train_exact, Parameter, ProbabilityDistribution, TrainConfig};
use serde::Serialize;

use super::load_machine;
use crate::error::CliError;
use crate::formats::{empirical_distribution, parse_json, parse_samples, DistributionDoc, MachineDoc};
use crate::report::{read_input, RunReport};

#[derive(Clone, Debug)]
pub struct TrainArgs {
    pub machine: PathBuf,
    /// Either a `{"probs": [...]}` document or a sample file over the visible spins.
    pub data: PathBuf,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

#[derive(Serialize)]
struct TargetSummary {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_samples: Option<usize>,
    probs: Vec<f64>,
}

#[derive(Serialize)]
struct FisherDoc {
    parameters: Vec<String>,
    entries: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TrainReport {
    target: TargetSummary,
    epochs_run: usize,
    final_kl: f64,
    final_learning_rate: f64,
    kl_trace: Vec<f64>,
    machine: MachineDoc,
    fisher: FisherDoc,
}

fn label(p: &Parameter) -> String {
    match p {
        Parameter::Weight(i, j) => format!("w[{i},{j}]"),
        Parameter::Bias(i) => format!("b[{i}]"),
    }
}

pub fn cmd_train(args: &TrainArgs) -> Result<RunReport, CliError> {
    let (machine, machine_digest) = load_machine(&args.machine)?;
    let (text, data_digest) = read_input(&args.data)?;
    let width = machine.visible().len();
    let (target, summary_kind, n_samples) = if text.trim_start().starts_with('{') {
        let doc: DistributionDoc = parse_json(&data_digest.path, &text)?;
        let p = ProbabilityDistribution::new(doc.probs).map_err(|e| CliError::invalid_input(&data_digest.path, e))?;
        (p, "distribution", None)
    } else {
        let samples = parse_samples(&data_digest.path, &text, width)?;
        (empirical_distribution(&samples, width), "samples", Some(samples.len()))
    };

    let config = TrainConfig { learning_rate: args.learning_rate, epochs: args.epochs, seed: args.seed };
    let outcome = train_exact(&machine, &target, &config).map_err(|e| CliError::invalid_input("train", e))?;
    let fisher = fisher_metric(&outcome.machine).map_err(|e| CliError::invalid_input("train", e))?;
    let report = TrainReport {
        target: TargetSummary { kind: summary_kind, n_samples, probs: target.probs().to_vec() },
        epochs_run: outcome.kl_trace.len() - 1,
        final_kl: outcome.final_kl(),
        final_learning_rate: outcome.final_learning_rate,
        kl_trace: outcome.kl_trace,
        machine: MachineDoc::from_machine(&outcome.machine),
        fisher: FisherDoc { parameters: fisher.parameters.iter().map(label).collect(), entries: fisher.entries },
    };
    RunReport::new("train", vec![machine_digest, data_digest], report, args.seed)
}
