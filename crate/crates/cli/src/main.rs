use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qbm::commands::{
    cmd_anneal, cmd_entropy, cmd_prep, cmd_probe, cmd_train, AnnealArgs, EntropyArgs, PrepArgs, ProbeArgs,
    TrainArgs,
};
use qbm::{CliError, RunReport};

#[derive(Parser)]
#[command(name = "qbm", version, about = "Boltzmann machines, quantum relative entropy and optimal probe states")]
struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal probe state, oracle check, QFI and preparation circuit for an observable.
    Probe {
        observable: PathBuf,
        #[arg(long, default_value_t = 200)]
        oracle_restarts: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Fit a Boltzmann machine to a distribution or sample file by exact KL descent.
    Train {
        machine: PathBuf,
        /// Distribution document or sample file over the visible spins.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 5000)]
        epochs: usize,
        #[arg(long, default_value_t = 0.1)]
        lr: f64,
    },
    /// Quantum relative entropy S(rho || sigma).
    Entropy { rho: PathBuf, sigma: PathBuf },
    /// Draw samples from a machine by simulated annealing.
    Anneal {
        machine: PathBuf,
        /// Comma-separated beta:sweeps stages with non-decreasing beta.
        #[arg(long)]
        schedule: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Write the sample file here instead of embedding the samples in the report.
        #[arg(long)]
        samples_out: Option<PathBuf>,
    },
    /// Preparation circuit for the optimal probe of an observable.
    Prep {
        observable: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
}

fn run(cli: Cli) -> Result<RunReport, CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::Probe { observable, oracle_restarts, phi } => {
            cmd_probe(&ProbeArgs { observable, oracle_restarts, phi, seed })
        }
        Command::Train { machine, data, epochs, lr } => {
            cmd_train(&TrainArgs { machine, data, epochs, learning_rate: lr, seed })
        }
        Command::Entropy { rho, sigma } => cmd_entropy(&EntropyArgs { rho, sigma, seed }),
        Command::Anneal { machine, schedule, samples, samples_out } => {
            cmd_anneal(&AnnealArgs { machine, schedule, samples, samples_out, seed })
        }
        Command::Prep { observable, phi } => cmd_prep(&PrepArgs { observable, phi, seed }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.out.clone();
    let result = run(cli).and_then(|report| {
        let text = report.to_json();
        match &out {
            Some(path) => fs::write(path, text)
                .map_err(|error| CliError::Io { path: path.display().to_string(), error }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
