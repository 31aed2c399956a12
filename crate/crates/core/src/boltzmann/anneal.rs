use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BoltzmannMachine, SpinConfig};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Hold inverse temperature `beta` for `sweeps` Metropolis sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealStage {
    pub beta: f64,
    pub sweeps: usize,
}

pub fn validate_schedule(schedule: &[AnnealStage]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::EmptySchedule);
    }
    for (k, stage) in schedule.iter().enumerate() {
        if !(stage.beta > 0.0 && stage.beta.is_finite()) {
            return Err(Error::InvalidSchedule(format!(
                "stage {k}: beta must be positive, got {}",
                stage.beta
            )));
        }
        if k > 0 && stage.beta < schedule[k - 1].beta {
            return Err(Error::InvalidSchedule(format!("stage {k}: beta decreases")));
        }
    }
    Ok(())
}

/// Runs one independent chain from a uniformly random configuration through
/// the whole schedule and returns its final state. Chain `index` draws from
/// stream `index` of the ChaCha generator seeded with `seed`, so chains can
/// be evaluated in any order.
pub fn anneal_chain(m: &BoltzmannMachine, schedule: &[AnnealStage], seed: u64, index: u64) -> SpinConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = m.n_spins();
    let mut spins: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    for stage in schedule {
        for _ in 0..stage.sweeps {
            for i in 0..n {
                let delta = 2.0 * f64::from(spins[i]) * m.local_field(i, &spins);
                if delta <= 0.0 || rng.random::<f64>() < (-stage.beta * delta).exp() {
                    spins[i] = -spins[i];
                }
            }
        }
    }
    SpinConfig(spins)
}

/// Draws `n_samples` configurations, each the end point of an independent
/// Metropolis chain driven by `schedule`. The schedule's inverse
/// temperatures replace the machine's own.
pub fn simulated_anneal(
    m: &BoltzmannMachine,
    schedule: &[AnnealStage],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<SpinConfig>> {
    validate_schedule(schedule)?;
    Ok((0..n_samples as u64).map(|k| anneal_chain(m, schedule, seed, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boltzmann::{boltzmann_distribution, ProbabilityDistribution};

    fn empirical(samples: &[SpinConfig], n: usize) -> ProbabilityDistribution {
        let mut counts = alloc::vec![0.0; 1 << n];
        for s in samples {
            counts[s.label()] += 1.0;
        }
        ProbabilityDistribution::from_weights(&counts).unwrap()
    }

    #[test]
    fn schedule_validation() {
        assert_eq!(validate_schedule(&[]), Err(Error::EmptySchedule));
        let decreasing = [AnnealStage { beta: 2.0, sweeps: 1 }, AnnealStage { beta: 1.0, sweeps: 1 }];
        assert!(matches!(validate_schedule(&decreasing), Err(Error::InvalidSchedule(_))));
        assert!(validate_schedule(&[AnnealStage { beta: 0.0, sweeps: 1 }]).is_err());
    }

    #[test]
    fn infinite_temperature_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = BoltzmannMachine::fully_visible(2, 1.0).unwrap().randomized(1.0, &mut rng);
        let n = 100_000;
        let samples = simulated_anneal(&m, &[AnnealStage { beta: 1e-9, sweeps: 5 }], n, 3).unwrap();
        let freq = empirical(&samples, 2);
        let sigma = (0.25 * 0.75 / n as f64).sqrt();
        for p in freq.probs() {
            assert!((p - 0.25).abs() < 3.0 * sigma, "{p}");
        }
    }

    #[test]
    fn single_spin_matches_enumeration() {
        let m = BoltzmannMachine::new(1.0, alloc::vec![alloc::vec![0]], &[], alloc::vec![1.0]).unwrap();
        let schedule = [AnnealStage { beta: 0.1, sweeps: 100 }, AnnealStage { beta: 1.0, sweeps: 1000 }];
        let samples = simulated_anneal(&m, &schedule, 100_000, 0).unwrap();
        let freq = empirical(&samples, 1);
        assert!((freq.probs()[0] - 0.8808).abs() < 0.01);
    }

    #[test]
    fn ferromagnet_matches_enumeration() {
        let m = BoltzmannMachine::new(2.0, alloc::vec![alloc::vec![0, 1]], &[(0, 1, 1.0)], alloc::vec![0.0; 2])
            .unwrap();
        let schedule = [AnnealStage { beta: 0.5, sweeps: 50 }, AnnealStage { beta: 2.0, sweeps: 1000 }];
        let samples = simulated_anneal(&m, &schedule, 100_000, 4).unwrap();
        let exact = boltzmann_distribution(&m).unwrap();
        assert!(empirical(&samples, 2).total_variation(&exact).unwrap() < 0.02);
    }

    #[test]
    fn chains_are_reproducible() {
        let m = BoltzmannMachine::fully_visible(3, 1.0).unwrap();
        let schedule = [AnnealStage { beta: 1.0, sweeps: 10 }];
        assert_eq!(
            simulated_anneal(&m, &schedule, 50, 8).unwrap(),
            simulated_anneal(&m, &schedule, 50, 8).unwrap()
        );
        assert_eq!(anneal_chain(&m, &schedule, 8, 17), simulated_anneal(&m, &schedule, 18, 8).unwrap()[17]);
    }
}
