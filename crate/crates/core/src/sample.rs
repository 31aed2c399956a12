//! Seeded random matrices and states for property tests and sweeps.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::kernel::{ComplexMatrix, C64};
#[allow(unused_imports)]
use num_traits::Float;

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// GUE-like Hermitian matrix `(G + G^H) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, rng).hermitian_part()
}

/// Full-rank random density matrix `G G^H / Tr(G G^H)`.
pub fn ginibre_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let gg = g.matmul(&g.adjoint()).hermitian_part();
    let tr = gg.trace().re;
    gg.scale_real(1.0 / tr)
}

/// Uniformly distributed unit vector in `C^dim`.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let mut psi: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    psi
}

/// Random unitary obtained by Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut c = g.column(j);
        for prev in &cols {
            let overlap: C64 = prev.iter().zip(&c).map(|(p, x)| p.conj() * x).sum();
            c.iter_mut().zip(prev).for_each(|(x, p)| *x -= overlap * p);
        }
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        c.iter_mut().for_each(|z| *z /= norm);
        cols.push(c);
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}
