use std::fs;
use std::path::PathBuf;

use qbm_core::boltzmann::{boltzmann_distribution, AnnealStage};
use serde::Serialize;

use super::load_machine;
use crate::error::CliError;
use crate::formats::{empirical_distribution, format_samples};
use crate::parallel;
use crate::report::{digest, InputDigest, RunReport};

/// Largest machine for which the exact distribution is enumerated for comparison.
pub const EXACT_COMPARISON_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub struct AnnealArgs {
    pub machine: PathBuf,
    /// `beta:sweeps` stages separated by commas, e.g. `0.1:100,1:1000`.
    pub schedule: String,
    pub samples: usize,
    /// Where to write the sample file; when absent the samples are embedded in the report.
    pub samples_out: Option<PathBuf>,
    pub seed: u64,
}

#[derive(Serialize)]
struct StageDoc {
    beta: f64,
    sweeps: usize,
}

#[derive(Serialize)]
struct Comparison {
    exact: Vec<f64>,
    empirical: Vec<f64>,
    total_variation: f64,
}

#[derive(Serialize)]
struct AnnealReport {
    schedule: Vec<StageDoc>,
    n_spins: usize,
    n_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples_file: Option<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
}

pub fn parse_schedule(text: &str) -> Result<Vec<AnnealStage>, CliError> {
    let bad = |message: String| CliError::Parse { origin: "--schedule".into(), line: None, message };
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|stage| {
            let (beta, sweeps) = stage
                .split_once(':')
                .ok_or_else(|| bad(format!("stage {stage:?} is not of the form beta:sweeps")))?;
            let beta = beta.trim().parse::<f64>().map_err(|e| bad(format!("beta {beta:?}: {e}")))?;
            let sweeps = sweeps.trim().parse::<usize>().map_err(|e| bad(format!("sweeps {sweeps:?}: {e}")))?;
            Ok(AnnealStage { beta, sweeps })
        })
        .collect()
}

pub fn cmd_anneal(args: &AnnealArgs) -> Result<RunReport, CliError> {
    let (machine, machine_digest) = load_machine(&args.machine)?;
    let schedule = parse_schedule(&args.schedule)?;
    let samples = parallel::simulated_anneal(&machine, &schedule, args.samples, args.seed)
        .map_err(|e| CliError::invalid_input("--schedule", e))?;
    let n = machine.n_spins();

    let comparison = if n <= EXACT_COMPARISON_LIMIT && !samples.is_empty() {
        let final_beta = schedule.last().expect("validated schedule is non-empty").beta;
        let at_final = machine.with_beta(final_beta).map_err(|e| CliError::invalid_input("anneal", e))?;
        let exact = boltzmann_distribution(&at_final).map_err(|e| CliError::invalid_input("anneal", e))?;
        let empirical = empirical_distribution(&samples, n);
        let total_variation = exact.total_variation(&empirical).map_err(|e| CliError::invalid_input("anneal", e))?;
        Some(Comparison { exact: exact.probs().to_vec(), empirical: empirical.probs().to_vec(), total_variation })
    } else {
        None
    };

    let text = format_samples(&samples);
    let (samples_file, embedded) = match &args.samples_out {
        Some(path) => {
            let display = path.display().to_string();
            fs::write(path, &text).map_err(|error| CliError::Io { path: display.clone(), error })?;
            (Some(InputDigest { path: display, sha256: digest(text.as_bytes()) }), None)
        }
        None => (None, Some(text.lines().map(str::to_string).collect())),
    };
    let report = AnnealReport {
        schedule: schedule.iter().map(|s| StageDoc { beta: s.beta, sweeps: s.sweeps }).collect(),
        n_spins: n,
        n_samples: samples.len(),
        samples_file,
        samples: embedded,
        comparison,
    };
    RunReport::new("anneal", vec![machine_digest], report, args.seed)
}
