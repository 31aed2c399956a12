//! Multi-threaded drivers whose results match the sequential core routines
//! exactly: work items are seeded by index and reduced in index order.

use qbm_core::boltzmann::{anneal_chain, validate_schedule, AnnealStage, BoltzmannMachine, SpinConfig};
use qbm_core::optim::NelderMeadOptions;
use qbm_core::probe::{best_restart, check_oracle_input, oracle_restart, OracleResult};
use qbm_core::qstate::Observable;
use qbm_core::Result;
use rayon::prelude::*;

pub fn oracle_max_pure(o: &Observable, restarts: usize, seed: u64) -> Result<OracleResult> {
    check_oracle_input(o, restarts)?;
    let options = NelderMeadOptions::default();
    let outcomes: Vec<_> = (0..restarts).into_par_iter().map(|k| oracle_restart(o, seed, k, &options)).collect();
    OracleResult::from_outcome(best_restart(outcomes).expect("at least one restart"))
}

pub fn simulated_anneal(
    m: &BoltzmannMachine,
    schedule: &[AnnealStage],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<SpinConfig>> {
    validate_schedule(schedule)?;
    Ok((0..n_samples as u64).into_par_iter().map(|k| anneal_chain(m, schedule, seed, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qbm_core::boltzmann;
    use qbm_core::probe;

    #[test]
    fn matches_sequential_oracle() {
        let o = Observable::from_diagonal(&[0.3, -1.0, 0.7]);
        assert_eq!(oracle_max_pure(&o, 12, 4).unwrap(), probe::oracle_max_pure(&o, 12, 4).unwrap());
    }

    #[test]
    fn matches_sequential_annealing() {
        let m = BoltzmannMachine::new(1.0, vec![vec![0, 1, 2]], &[(0, 1, 0.5), (1, 2, -0.3)], vec![0.2, 0.0, -0.1]).unwrap();
        let schedule = [AnnealStage { beta: 0.2, sweeps: 5 }, AnnealStage { beta: 1.0, sweeps: 20 }];
        assert_eq!(
            simulated_anneal(&m, &schedule, 500, 9).unwrap(),
            boltzmann::simulated_anneal(&m, &schedule, 500, 9).unwrap()
        );
    }
}
