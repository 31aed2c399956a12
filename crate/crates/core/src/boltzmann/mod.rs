//! Classical Ising-model Boltzmann machines evaluated by exact enumeration.
//!
//! Configurations are labelled by integers: bit `i` of a label is `0` when
//! spin `i` is `+1` and `1` when it is `-1`. Visible labels use the same
//! convention over the visible spins in the order they are declared.

mod anneal;
mod fisher;
mod train;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

pub use anneal::{anneal_chain, simulated_anneal, validate_schedule, AnnealStage};
pub use fisher::{fisher_metric, FisherMetric};
pub use train::{train_exact, TrainConfig, TrainOutcome};

/// Largest machine whose distribution is enumerated exactly.
pub const ENUMERATION_LIMIT: usize = 24;
/// Largest machine accepted by training and the Fisher metric.
pub const TRAINING_LIMIT: usize = 20;
/// Tolerance on the total mass of a distribution.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("distribution has no states".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidArgument(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights (for example sample counts).
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument("weights must be nonnegative with positive sum".into()));
        }
        Ok(Self { probs: weights.iter().map(|w| w / total).collect() })
    }

    pub fn uniform(n_states: usize) -> Self {
        Self { probs: vec![1.0 / n_states as f64; n_states] }
    }

    pub fn n_states(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        check_states(self, other)?;
        Ok(0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }
}

fn check_states(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<()> {
    if p.n_states() != q.n_states() {
        return Err(Error::DimMismatch { expected: p.n_states(), found: q.n_states() });
    }
    Ok(())
}

/// Spin configuration over `{-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(s) = spins.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::InvalidArgument(format!("spin value {s} is not +1 or -1")));
        }
        Ok(Self(spins))
    }

    pub fn from_label(label: usize, n: usize) -> Self {
        Self((0..n).map(|i| if label >> i & 1 == 0 { 1 } else { -1 }).collect())
    }

    pub fn label(&self) -> usize {
        self.0.iter().enumerate().filter(|(_, s)| **s < 0).map(|(i, _)| 1 << i).sum()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A trainable coupling or field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parameter {
    Weight(usize, usize),
    Bias(usize),
}

/// Ising spin network `H(s) = -sum_{i<j} w_ij s_i s_j - sum_i b_i s_i` at
/// inverse temperature `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoltzmannMachine {
    n_spins: usize,
    weights: Vec<f64>,
    biases: Vec<f64>,
    beta: f64,
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
}

impl BoltzmannMachine {
    /// `layers[0]` is the visible layer. With a single layer every pair may
    /// couple; otherwise only spins in adjacent layers may.
    pub fn new(
        beta: f64,
        layers: Vec<Vec<usize>>,
        weights: &[(usize, usize, f64)],
        biases: Vec<f64>,
    ) -> Result<Self> {
        let n_spins = biases.len();
        if n_spins == 0 {
            return Err(Error::InvalidMachine("machine has no spins".into()));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidMachine(format!("beta must be positive, got {beta}")));
        }
        if biases.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidMachine("biases must be finite".into()));
        }
        if layers.first().is_none_or(|l| l.is_empty()) {
            return Err(Error::InvalidMachine("visible layer is empty".into()));
        }
        let mut layer_of = vec![usize::MAX; n_spins];
        for (k, layer) in layers.iter().enumerate() {
            for &i in layer {
                if i >= n_spins {
                    return Err(Error::InvalidMachine(format!("layer spin {i} out of range")));
                }
                if layer_of[i] != usize::MAX {
                    return Err(Error::InvalidMachine(format!("spin {i} appears in two layers")));
                }
                layer_of[i] = k;
            }
        }
        if let Some(i) = layer_of.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidMachine(format!("spin {i} belongs to no layer")));
        }
        let mut machine = Self {
            n_spins,
            weights: vec![0.0; n_spins * n_spins],
            biases,
            beta,
            layers,
            layer_of,
        };
        for &(i, j, w) in weights {
            if i >= n_spins || j >= n_spins || i == j {
                return Err(Error::InvalidMachine(format!("invalid coupling ({i}, {j})")));
            }
            if !w.is_finite() {
                return Err(Error::InvalidMachine(format!("coupling ({i}, {j}) is not finite")));
            }
            if !machine.allowed(i, j) && w != 0.0 {
                return Err(Error::InvalidMachine(format!(
                    "coupling ({i}, {j}) violates the layer structure"
                )));
            }
            if machine.weight(i, j) != 0.0 {
                return Err(Error::InvalidMachine(format!("coupling ({i}, {j}) given twice")));
            }
            machine.set_weight(i, j, w);
        }
        Ok(machine)
    }

    /// Machine without hidden units; every pair may couple.
    pub fn fully_visible(n_spins: usize, beta: f64) -> Result<Self> {
        Self::new(beta, vec![(0..n_spins).collect()], &[], vec![0.0; n_spins])
    }

    /// Zero-parameter machine whose layers hold consecutive spin indices.
    pub fn layered(sizes: &[usize], beta: f64) -> Result<Self> {
        let mut next = 0;
        let layers = sizes
            .iter()
            .map(|&s| {
                let layer: Vec<usize> = (next..next + s).collect();
                next += s;
                layer
            })
            .collect();
        Self::new(beta, layers, &[], vec![0.0; next])
    }

    /// Fills every allowed parameter with a uniform draw from `[-scale, scale]`.
    pub fn randomized<R: Rng + ?Sized>(mut self, scale: f64, rng: &mut R) -> Self {
        let values: Vec<f64> =
            (0..self.n_parameters()).map(|_| rng.random_range(-scale..=scale)).collect();
        self.set_parameters(&values);
        self
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidMachine(format!("beta must be positive, got {beta}")));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn visible(&self) -> &[usize] {
        &self.layers[0]
    }

    pub fn hidden(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers[1..].iter().flatten().copied()
    }

    pub fn n_hidden(&self) -> usize {
        self.n_spins - self.visible().len()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n_spins + j]
    }

    pub fn bias(&self, i: usize) -> f64 {
        self.biases[i]
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    fn set_weight(&mut self, i: usize, j: usize, w: f64) {
        self.weights[i * self.n_spins + j] = w;
        self.weights[j * self.n_spins + i] = w;
    }

    /// Whether the layer structure permits a coupling between `i` and `j`.
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        self.layers.len() == 1 || self.layer_of[i].abs_diff(self.layer_of[j]) == 1
    }

    /// Trainable parameters: allowed pairs `i < j` in row order, then biases.
    pub fn parameter_labels(&self) -> Vec<Parameter> {
        let n = self.n_spins;
        let mut labels: Vec<Parameter> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.allowed(i, j))
            .map(|(i, j)| Parameter::Weight(i, j))
            .collect();
        labels.extend((0..n).map(Parameter::Bias));
        labels
    }

    pub fn n_parameters(&self) -> usize {
        self.parameter_labels().len()
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.parameter_labels()
            .into_iter()
            .map(|p| match p {
                Parameter::Weight(i, j) => self.weight(i, j),
                Parameter::Bias(i) => self.biases[i],
            })
            .collect()
    }

    /// Panics if `values` does not match [`Self::n_parameters`].
    pub fn set_parameters(&mut self, values: &[f64]) {
        let labels = self.parameter_labels();
        assert_eq!(labels.len(), values.len(), "parameter count mismatch");
        for (p, &v) in labels.into_iter().zip(values) {
            match p {
                Parameter::Weight(i, j) => self.set_weight(i, j, v),
                Parameter::Bias(i) => self.biases[i] = v,
            }
        }
    }

    /// Nonzero couplings `(i, j, w)` with `i < j`.
    pub fn couplings(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n_spins;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.weight(i, j)))
            .filter(|c| c.2 != 0.0)
            .collect()
    }

    /// Local field `sum_j w_ij s_j + b_i` acting on spin `i`.
    pub(crate) fn local_field(&self, i: usize, spins: &[i8]) -> f64 {
        let row = &self.weights[i * self.n_spins..(i + 1) * self.n_spins];
        row.iter().zip(spins).map(|(w, &s)| w * f64::from(s)).sum::<f64>() + self.biases[i]
    }

    /// Sufficient statistics matching [`Self::parameter_labels`].
    pub(crate) fn statistics(&self, labels: &[Parameter], spins: &[i8]) -> Vec<f64> {
        labels
            .iter()
            .map(|p| match *p {
                Parameter::Weight(i, j) => f64::from(spins[i] * spins[j]),
                Parameter::Bias(i) => f64::from(spins[i]),
            })
            .collect()
    }

    fn energy_unchecked(&self, spins: &[i8]) -> f64 {
        let n = self.n_spins;
        let mut e = 0.0;
        for i in 0..n {
            let si = f64::from(spins[i]);
            for j in i + 1..n {
                e -= self.weights[i * n + j] * si * f64::from(spins[j]);
            }
            e -= self.biases[i] * si;
        }
        e
    }

    /// Visible label of a joint label.
    pub fn visible_label(&self, joint: usize) -> usize {
        self.visible()
            .iter()
            .enumerate()
            .map(|(k, &i)| (joint >> i & 1) << k)
            .sum()
    }
}

pub fn ising_energy(m: &BoltzmannMachine, s: &SpinConfig) -> Result<f64> {
    if s.len() != m.n_spins {
        return Err(Error::DimMismatch { expected: m.n_spins, found: s.len() });
    }
    Ok(m.energy_unchecked(s.spins()))
}

fn check_enumerable(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge { size: n, limit });
    }
    Ok(())
}

/// Exact `exp(-beta H) / Z` over every joint configuration.
pub fn boltzmann_distribution(m: &BoltzmannMachine) -> Result<ProbabilityDistribution> {
    check_enumerable(m.n_spins, ENUMERATION_LIMIT)?;
    Ok(ProbabilityDistribution { probs: gibbs_weights(m) })
}

pub(crate) fn gibbs_weights(m: &BoltzmannMachine) -> Vec<f64> {
    let n = m.n_spins;
    let mut spins = vec![1i8; n];
    let log_weights: Vec<f64> = (0..1usize << n)
        .map(|label| {
            for (i, s) in spins.iter_mut().enumerate() {
                *s = if label >> i & 1 == 0 { 1 } else { -1 };
            }
            -m.beta * m.energy_unchecked(&spins)
        })
        .collect();
    let shift = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = log_weights.iter().map(|lw| (lw - shift).exp()).collect();
    let z: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= z);
    probs
}

/// `D(p || q) = sum_x p(x) ln(p(x) / q(x))` in nats; `+inf` when `p` puts
/// mass where `q` has none.
pub fn kl_divergence(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    check_states(p, q)?;
    let mut total = 0.0;
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total.max(0.0))
}

/// Sums a joint distribution over every hidden assignment.
pub fn marginalize_hidden(
    joint: &ProbabilityDistribution,
    m: &BoltzmannMachine,
) -> Result<ProbabilityDistribution> {
    if m.n_hidden() == 0 {
        return Err(Error::NoHiddenLayer);
    }
    Ok(ProbabilityDistribution { probs: marginal_probs(&joint.probs, m)? })
}

pub(crate) fn marginal_probs(joint: &[f64], m: &BoltzmannMachine) -> Result<Vec<f64>> {
    if joint.len() != 1 << m.n_spins {
        return Err(Error::DimMismatch { expected: 1 << m.n_spins, found: joint.len() });
    }
    let mut visible = vec![0.0; 1 << m.visible().len()];
    for (label, p) in joint.iter().enumerate() {
        visible[m.visible_label(label)] += p;
    }
    Ok(visible)
}

/// Exact distribution over visible configurations (the joint itself when
/// there are no hidden spins).
pub fn visible_distribution(m: &BoltzmannMachine) -> Result<ProbabilityDistribution> {
    check_enumerable(m.n_spins, ENUMERATION_LIMIT)?;
    Ok(ProbabilityDistribution { probs: marginal_probs(&gibbs_weights(m), m)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_distribution(n: usize, rng: &mut ChaCha8Rng) -> ProbabilityDistribution {
        let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        ProbabilityDistribution::from_weights(&w).unwrap()
    }

    #[test]
    fn energy_examples() {
        let zero = BoltzmannMachine::fully_visible(3, 1.0).unwrap();
        for label in 0..8 {
            assert_eq!(ising_energy(&zero, &SpinConfig::from_label(label, 3)).unwrap(), 0.0);
        }
        let pair = BoltzmannMachine::new(1.0, vec![vec![0, 1]], &[(0, 1, 1.0)], vec![0.0, 0.0]).unwrap();
        assert_eq!(ising_energy(&pair, &SpinConfig::new(vec![1, 1]).unwrap()).unwrap(), -1.0);
        let single = BoltzmannMachine::new(1.0, vec![vec![0]], &[], vec![2.0]).unwrap();
        assert_eq!(ising_energy(&single, &SpinConfig::new(vec![-1]).unwrap()).unwrap(), 2.0);
        assert!(matches!(
            ising_energy(&single, &SpinConfig::new(vec![1, 1]).unwrap()),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn machine_validation() {
        assert!(BoltzmannMachine::new(0.0, vec![vec![0]], &[], vec![0.0]).is_err());
        assert!(BoltzmannMachine::new(1.0, vec![vec![0]], &[], vec![0.0, 0.0]).is_err());
        // Intra-layer coupling in a restricted machine.
        let err = BoltzmannMachine::new(1.0, vec![vec![0, 1], vec![2]], &[(0, 1, 0.5)], vec![0.0; 3]);
        assert!(matches!(err, Err(Error::InvalidMachine(_))));
        // Skipping a layer in a deep machine.
        let err = BoltzmannMachine::new(1.0, vec![vec![0], vec![1], vec![2]], &[(0, 2, 0.5)], vec![0.0; 3]);
        assert!(err.is_err());
        assert!(SpinConfig::new(vec![1, 0]).is_err());
    }

    #[test]
    fn label_convention_roundtrips() {
        for label in 0..16 {
            assert_eq!(SpinConfig::from_label(label, 4).label(), label);
        }
        assert_eq!(SpinConfig::from_label(0, 2).spins(), [1, 1]);
        assert_eq!(SpinConfig::from_label(1, 2).spins(), [-1, 1]);
    }

    #[test]
    fn distribution_examples() {
        let free = BoltzmannMachine::fully_visible(1, 1.0).unwrap();
        assert_eq!(boltzmann_distribution(&free).unwrap().probs(), [0.5, 0.5]);

        let biased = BoltzmannMachine::new(1.0, vec![vec![0]], &[], vec![1.0]).unwrap();
        let p = boltzmann_distribution(&biased).unwrap();
        let e = 1.0_f64.exp();
        assert!((p.probs()[0] - e / (e + 1.0 / e)).abs() < 1e-15);
        assert!((p.probs()[0] - 0.880797).abs() < 1e-6);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = BoltzmannMachine::fully_visible(4, 1.3).unwrap().randomized(1.0, &mut rng);
        let k = 2.5;
        let params: Vec<f64> = m.parameters().iter().map(|x| x / k).collect();
        let mut scaled = m.clone().with_beta(1.3 * k).unwrap();
        scaled.set_parameters(&params);
        let a = boltzmann_distribution(&m).unwrap();
        let b = boltzmann_distribution(&scaled).unwrap();
        assert!(a.probs().iter().zip(b.probs()).all(|(x, y)| (x - y).abs() < 1e-12));

        assert!(matches!(
            boltzmann_distribution(&BoltzmannMachine::fully_visible(25, 1.0).unwrap()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn distribution_survives_large_energies() {
        let m = BoltzmannMachine::new(1.0, vec![vec![0, 1]], &[(0, 1, 800.0)], vec![0.0, 0.0]).unwrap();
        let p = boltzmann_distribution(&m).unwrap();
        assert!((p.probs()[0] - 0.5).abs() < 1e-12 && (p.probs()[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn normalization_on_random_machines() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=12 {
            let m = BoltzmannMachine::fully_visible(n, 0.7).unwrap().randomized(1.5, &mut rng);
            let total: f64 = boltzmann_distribution(&m).unwrap().probs().iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn kl_examples() {
        let half = ProbabilityDistribution::uniform(2);
        let point = ProbabilityDistribution::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(kl_divergence(&half, &half).unwrap(), 0.0);
        assert!((kl_divergence(&point, &half).unwrap() - core::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(kl_divergence(&half, &point).unwrap(), f64::INFINITY);
        assert!(matches!(
            kl_divergence(&half, &ProbabilityDistribution::uniform(3)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn gibbs_inequality_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..1000 {
            let n = 2 + trial % 9;
            let p = random_distribution(n, &mut rng);
            let q = random_distribution(n, &mut rng);
            let d = kl_divergence(&p, &q).unwrap();
            let max_diff = p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(d >= 0.0);
            assert_eq!(d == 0.0, max_diff < 1e-12, "trial {trial}");
            assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn marginalization_examples() {
        // Product of independent visible (spin 0) and hidden (spin 1) factors.
        let (pv, ph) = ([0.3, 0.7], [0.6, 0.4]);
        let joint: Vec<f64> = (0..4).map(|l| pv[l & 1] * ph[l >> 1]).collect();
        let m = BoltzmannMachine::layered(&[1, 1], 1.0).unwrap();
        let marginal = marginalize_hidden(&ProbabilityDistribution::new(joint).unwrap(), &m).unwrap();
        assert!((marginal.probs()[0] - 0.3).abs() < 1e-15 && (marginal.probs()[1] - 0.7).abs() < 1e-15);

        let uniform = marginalize_hidden(&ProbabilityDistribution::uniform(4), &m).unwrap();
        assert_eq!(uniform.probs(), [0.5, 0.5]);

        let visible_only = BoltzmannMachine::fully_visible(2, 1.0).unwrap();
        assert_eq!(
            marginalize_hidden(&ProbabilityDistribution::uniform(4), &visible_only),
            Err(Error::NoHiddenLayer)
        );
    }

    #[test]
    fn marginal_matches_direct_hidden_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = BoltzmannMachine::layered(&[2, 1], 1.0).unwrap().randomized(1.0, &mut rng);
        let joint = boltzmann_distribution(&m).unwrap();
        let marginal = marginalize_hidden(&joint, &m).unwrap();
        // Oracle: enumerate spins explicitly and sum over the hidden bit.
        for v0 in [1i8, -1] {
            for v1 in [1i8, -1] {
                let direct: f64 = [1i8, -1]
                    .iter()
                    .map(|&h| joint.probs()[SpinConfig::new(vec![v0, v1, h]).unwrap().label()])
                    .sum();
                let vis = SpinConfig::new(vec![v0, v1]).unwrap().label();
                assert!((marginal.probs()[vis] - direct).abs() < 1e-14);
            }
        }
        assert!((marginal.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
