use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{
    check_enumerable, gibbs_weights, kl_divergence, marginal_probs, BoltzmannMachine,
    Parameter, ProbabilityDistribution, SpinConfig, TRAINING_LIMIT,
};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Gradient norm below which a point counts as stationary.
const STATIONARY_TOL: f64 = 1e-12;
/// Loss below which a stationary point is accepted as the optimum.
const OPTIMAL_KL: f64 = 1e-12;
/// Standard deviation of the kick applied at a non-optimal stationary start.
const SYMMETRY_KICK: f64 = 1e-2;
const MIN_LEARNING_RATE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { learning_rate: 0.1, epochs: 5000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub machine: BoltzmannMachine,
    /// `kl_trace[0]` is the starting loss; one entry per completed epoch follows.
    pub kl_trace: Vec<f64>,
    pub final_learning_rate: f64,
}

impl TrainOutcome {
    pub fn final_kl(&self) -> f64 {
        *self.kl_trace.last().expect("trace holds the starting loss")
    }
}

struct Evaluation {
    kl: f64,
    gradient: Vec<f64>,
}

impl Evaluation {
    fn gradient_norm(&self) -> f64 {
        self.gradient.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    /// Gradient norm restricted to the coupling parameters; `None` when the
    /// machine has no couplings to train.
    fn coupling_gradient_norm(&self, labels: &[Parameter]) -> Option<f64> {
        let mut coupled = labels.iter().zip(&self.gradient).filter(|(p, _)| matches!(p, Parameter::Weight(..))).peekable();
        coupled.peek()?;
        Some(coupled.map(|(_, g)| g * g).sum::<f64>().sqrt())
    }
}

/// Loss `D(q || p_visible)` and its exact gradient
/// `beta * (E_model[stat] - E_data[stat])`, where the data expectation uses
/// `q(v) p(h | v)`.
fn evaluate(m: &BoltzmannMachine, target: &ProbabilityDistribution) -> Result<Evaluation> {
    let joint = gibbs_weights(m);
    let visible = marginal_probs(&joint, m)?;
    let kl = kl_divergence(target, &ProbabilityDistribution { probs: visible.clone() })?;

    let labels = m.parameter_labels();
    let mut gradient = vec![0.0; labels.len()];
    for (label, &p) in joint.iter().enumerate() {
        let v = m.visible_label(label);
        let data_weight = if visible[v] > 0.0 { target.probs()[v] * p / visible[v] } else { 0.0 };
        let spins = SpinConfig::from_label(label, m.n_spins());
        let stats = m.statistics(&labels, spins.spins());
        for (g, s) in gradient.iter_mut().zip(&stats) {
            *g += (p - data_weight) * s;
        }
    }
    gradient.iter_mut().for_each(|g| *g *= m.beta());
    if gradient.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFiniteGradient);
    }
    Ok(Evaluation { kl, gradient })
}

/// Fits the visible marginal of `m` to `target` by exact gradient descent on
/// `D(target || p_visible)`.
///
/// A step that would raise the loss is rejected and the learning rate
/// halved, so the recorded trace never increases. Training stops early at a
/// stationary point.
///
/// All-zero couplings with zero hidden biases form an invariant set of exact
/// gradient descent: the hidden units stay uncorrelated with the visible ones
/// and the coupling gradient vanishes identically. When the start is not
/// optimal and either the whole gradient or its coupling part vanishes, a
/// small seeded Gaussian kick is applied to every parameter first.
pub fn train_exact(
    m: &BoltzmannMachine,
    target: &ProbabilityDistribution,
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    check_enumerable(m.n_spins(), TRAINING_LIMIT)?;
    let n_visible_states = 1usize << m.visible().len();
    if target.n_states() != n_visible_states {
        return Err(Error::DimMismatch { expected: n_visible_states, found: target.n_states() });
    }
    if !(config.learning_rate > 0.0 && config.learning_rate.is_finite()) {
        return Err(Error::InvalidArgument("learning rate must be positive".into()));
    }

    let mut machine = m.clone();
    let mut current = evaluate(&machine, target)?;
    let labels = machine.parameter_labels();
    let stuck = current.gradient_norm() < STATIONARY_TOL
        || current.coupling_gradient_norm(&labels).is_some_and(|g| g < STATIONARY_TOL);
    if stuck && current.kl > OPTIMAL_KL {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let kicked: Vec<f64> = machine
            .parameters()
            .iter()
            .map(|p| p + SYMMETRY_KICK * Distribution::<f64>::sample(&StandardNormal, &mut rng))
            .collect();
        machine.set_parameters(&kicked);
        current = evaluate(&machine, target)?;
    }

    let mut rate = config.learning_rate;
    let mut kl_trace = vec![current.kl];
    'epochs: for _ in 0..config.epochs {
        if current.gradient_norm() < STATIONARY_TOL {
            break;
        }
        let params = machine.parameters();
        loop {
            let proposal: Vec<f64> =
                params.iter().zip(&current.gradient).map(|(p, g)| p - rate * g).collect();
            let mut candidate = machine.clone();
            candidate.set_parameters(&proposal);
            let next = evaluate(&candidate, target)?;
            if next.kl <= current.kl {
                machine = candidate;
                current = next;
                break;
            }
            rate *= 0.5;
            if rate < MIN_LEARNING_RATE {
                break 'epochs;
            }
        }
        kl_trace.push(current.kl);
    }
    Ok(TrainOutcome { machine, kl_trace, final_learning_rate: rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boltzmann::visible_distribution;

    #[test]
    fn already_optimal_target_is_left_alone() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = BoltzmannMachine::layered(&[2, 1], 1.0).unwrap().randomized(1.0, &mut rng);
        let target = visible_distribution(&m).unwrap();
        let out = train_exact(&m, &target, &TrainConfig::default()).unwrap();
        assert!(out.kl_trace[0] < 1e-15);
        assert_eq!(out.kl_trace.len(), 1);
        assert_eq!(out.machine, m);
    }

    #[test]
    fn single_spin_bias_is_recovered() {
        let m = BoltzmannMachine::fully_visible(1, 1.0).unwrap();
        let target = ProbabilityDistribution::new(vec![0.8808, 0.1192]).unwrap();
        let out = train_exact(&m, &target, &TrainConfig::default()).unwrap();
        // Oracle: invert p(+1) = e^b / (e^b + e^-b).
        let exact = 0.5 * (0.8808_f64 / 0.1192).ln();
        assert!((exact - 1.0).abs() < 1e-3);
        assert!((out.machine.bias(0) - exact).abs() < 1e-6);
        assert!((out.machine.bias(0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn trace_is_monotone_and_respects_layers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = BoltzmannMachine::layered(&[3, 2], 1.0).unwrap();
        let target = ProbabilityDistribution::from_weights(
            &(0..8).map(|_| rand::Rng::random::<f64>(&mut rng) + 0.05).collect::<Vec<_>>(),
        )
        .unwrap();
        let out = train_exact(&m, &target, &TrainConfig { learning_rate: 5.0, epochs: 300, seed: 1 })
            .unwrap();
        assert!(out.kl_trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.final_learning_rate < 5.0, "halving should have triggered");
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(out.machine.weight(i, j), 0.0);
            }
        }
        assert_eq!(out.machine.weight(3, 4), 0.0);
    }

    #[test]
    fn zero_start_escapes_the_symmetric_set() {
        let m = BoltzmannMachine::layered(&[2, 1], 1.0).unwrap();
        let target = ProbabilityDistribution::new(vec![0.5, 0.0, 0.25, 0.25]).unwrap();
        // Best product distribution: p(spin 0 up) = 0.75, p(spin 1 up) = 0.5.
        let product = ProbabilityDistribution::new(vec![0.375, 0.125, 0.375, 0.125]).unwrap();
        let floor = kl_divergence(&target, &product).unwrap();
        let out = train_exact(&m, &target, &TrainConfig { learning_rate: 1.0, epochs: 3000, seed: 0 }).unwrap();
        assert!(out.final_kl() < floor - 0.1, "{} vs product floor {floor}", out.final_kl());
        assert!(out.machine.weight(0, 2) != 0.0);
    }

    #[test]
    fn rejects_mismatched_target_and_oversized_machine() {
        let m = BoltzmannMachine::layered(&[2, 1], 1.0).unwrap();
        let bad = ProbabilityDistribution::uniform(8);
        assert!(matches!(
            train_exact(&m, &bad, &TrainConfig::default()),
            Err(Error::DimMismatch { .. })
        ));
        let big = BoltzmannMachine::fully_visible(21, 1.0).unwrap();
        let target = ProbabilityDistribution::uniform(1 << 21);
        assert!(matches!(
            train_exact(&big, &target, &TrainConfig::default()),
            Err(Error::TooLarge { .. })
        ));
    }
}
