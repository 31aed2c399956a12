//! Derivative-free minimization (Nelder-Mead with dimension-adaptive
//! coefficients).

use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop once `f(worst) - f(best)` falls below this.
    pub f_tolerance: f64,
    /// Offset of the initial simplex vertices along each axis.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_iterations: 500, f_tolerance: 1e-9, initial_step: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

pub fn nelder_mead<F>(mut f: F, x0: &[f64], options: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n > 0, "cannot minimize over zero coordinates");
    let nf = n as f64;
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / nf;
    let contract = 0.75 - 0.5 / nf;
    let shrink = 1.0 - 1.0 / nf;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += options.initial_step;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let along = |from: &[f64], to: &[f64], t: f64| -> Vec<f64> {
        from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
    };

    let mut iterations = 0;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if iterations >= options.max_iterations || simplex[n].1 - simplex[0].1 < options.f_tolerance {
            break;
        }
        iterations += 1;

        let mut centroid = alloc::vec![0.0; n];
        for (x, _) in &simplex[..n] {
            centroid.iter_mut().zip(x).for_each(|(c, v)| *c += v / nf);
        }
        let worst = simplex[n].0.clone();
        let (f_best, f_second, f_worst) = (simplex[0].1, simplex[n - 1].1, simplex[n].1);

        let xr = along(&centroid, &worst, -reflect);
        let fr = f(&xr);
        if fr < f_best {
            let xe = along(&centroid, &xr, expand);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc, accepted) = if fr < f_worst {
            let xc = along(&centroid, &xr, contract);
            let fc = f(&xc);
            let ok = fc <= fr;
            (xc, fc, ok)
        } else {
            let xc = along(&centroid, &worst, contract);
            let fc = f(&xc);
            let ok = fc < f_worst;
            (xc, fc, ok)
        };
        if accepted {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = along(&best, &vertex.0, shrink);
            let fx = f(&x);
            *vertex = (x, fx);
        }
    }
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let target = [1.0, -2.0, 0.5];
        let f = |x: &[f64]| x.iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let opts = NelderMeadOptions { max_iterations: 2000, f_tolerance: 1e-16, initial_step: 1.0 };
        let m = nelder_mead(f, &[0.0; 3], &opts);
        assert!(m.value < 1e-12);
        assert!(m.x.iter().zip(&target).all(|(a, b)| (a - b).abs() < 1e-5));
    }

    #[test]
    fn rosenbrock_converges() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { max_iterations: 5000, f_tolerance: 1e-14, initial_step: 0.5 };
        let m = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert!((m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn respects_iteration_budget() {
        let m = nelder_mead(|x: &[f64]| x[0].abs(), &[10.0], &NelderMeadOptions { max_iterations: 3, ..Default::default() });
        assert_eq!(m.iterations, 3);
    }
}
