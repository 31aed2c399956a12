use alloc::vec;
use alloc::vec::Vec;

use super::{check_enumerable, gibbs_weights, BoltzmannMachine, Parameter, SpinConfig, TRAINING_LIMIT};
use crate::error::Result;

/// Fisher information of the joint model distribution over the machine's
/// trainable parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct FisherMetric {
    pub parameters: Vec<Parameter>,
    /// Row-major, `parameters.len()` square.
    pub entries: Vec<Vec<f64>>,
}

/// `beta^2 Cov[stat]` under the model, statistics ordered as
/// [`BoltzmannMachine::parameter_labels`].
pub fn fisher_metric(m: &BoltzmannMachine) -> Result<FisherMetric> {
    check_enumerable(m.n_spins(), TRAINING_LIMIT)?;
    let labels = m.parameter_labels();
    let k = labels.len();
    let probs = gibbs_weights(m);

    let mut mean = vec![0.0; k];
    let mut second = vec![vec![0.0; k]; k];
    for (label, &p) in probs.iter().enumerate() {
        let spins = SpinConfig::from_label(label, m.n_spins());
        let stats = m.statistics(&labels, spins.spins());
        for a in 0..k {
            mean[a] += p * stats[a];
            for b in a..k {
                second[a][b] += p * stats[a] * stats[b];
            }
        }
    }
    let beta2 = m.beta() * m.beta();
    let mut entries = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let cov = beta2 * (second[a][b] - mean[a] * mean[b]);
            entries[a][b] = cov;
            entries[b][a] = cov;
        }
    }
    Ok(FisherMetric { parameters: labels, entries })
}
