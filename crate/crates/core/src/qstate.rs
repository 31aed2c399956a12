//! Density matrices, observables and the quantities built from them.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::{
    self, commutator, eig_hermitian, kron, pauli_x, pauli_y, pauli_z, spectral_norm, ComplexMatrix,
    Subsystem, C64, DEGENERACY_TOL, HERMITIAN_TOL,
};
#[allow(unused_imports)]
use num_traits::Float;

pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Largest Hilbert-space dimension handled by the dense routines here.
pub const MAX_DIM: usize = 1 << 10;
pub const MAX_QUBITS: usize = 10;

/// Hermitian, unit-trace, positive semi-definite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let h = kernel::hermitian_checked(&mat)?;
        let trace = h.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity("trace"));
        }
        if eig_hermitian(&h)?.min_eigenvalue() < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity("positivity"));
        }
        Ok(Self(h))
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = state_norm(psi);
        if (norm - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(ComplexMatrix::outer(psi)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(probs))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
        self.0.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U rho U^H`.
    pub fn rotated(&self, u: &ComplexMatrix) -> Self {
        Self(u.matmul(&self.0).matmul(&u.adjoint()).hermitian_part())
    }
}

/// Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable(ComplexMatrix);

impl Observable {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Ok(Self(kernel::hermitian_checked(&mat)?))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_diagonal(diag))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn rotated(&self, u: &ComplexMatrix) -> Self {
        Self(u.matmul(&self.0).matmul(&u.adjoint()).hermitian_part())
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self(&self.0 + &ComplexMatrix::identity(self.dim()).scale_real(c))
    }
}

pub(crate) fn state_norm(psi: &[C64]) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimMismatch { expected, found });
    }
    Ok(())
}

/// Thermal state `exp(-beta H) / Tr exp(-beta H)`.
pub fn density_from_hamiltonian(h: &Observable, beta: f64) -> Result<DensityMatrix> {
    if h.dim() > MAX_DIM {
        return Err(Error::TooLarge { size: h.dim(), limit: MAX_DIM });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    let e = eig_hermitian(h.matrix())?;
    let ground = e.min_eigenvalue();
    let weights: Vec<f64> = e.eigenvalues.iter().map(|&x| (-beta * (x - ground)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / z).collect();
    Ok(DensityMatrix(e.reassemble_from(&probs).hermitian_part()))
}

/// `Tr[rho O]`.
pub fn expectation(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    check_dim(rho.dim(), o.dim())?;
    let (r, m) = (rho.matrix(), o.matrix());
    let n = r.dim();
    let value: C64 = (0..n).flat_map(|i| (0..n).map(move |j| r[(i, j)] * m[(j, i)])).sum();
    debug_assert!(value.im.abs() < 1e-10, "Tr[rho O] has imaginary part {}", value.im);
    Ok(value.re)
}

/// `S(rho || sigma) = Tr[rho (ln rho - ln sigma)]` in nats; `+inf` when the
/// support of `rho` is not contained in that of `sigma`.
pub fn quantum_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let rho_log = kernel::spectral_log(rho.matrix())?;
    let neg_entropy: f64 = rho_log
        .decomposition
        .eigenvalues
        .iter()
        .zip(&rho_log.log_eigenvalues)
        .filter(|(_, l)| l.is_finite())
        .map(|(p, l)| p * l)
        .sum();

    let sigma_log = kernel::spectral_log(sigma.matrix())?;
    let basis = &sigma_log.decomposition.basis;
    let mut cross = 0.0;
    for (k, &log_mu) in sigma_log.log_eigenvalues.iter().enumerate() {
        let v = basis.column(k);
        let weight = rho.matrix().mul_vec(&v).iter().zip(&v).map(|(a, b)| b.conj() * a).sum::<C64>().re;
        if log_mu.is_finite() {
            cross += weight * log_mu;
        } else if weight > DEGENERACY_TOL {
            return Ok(f64::INFINITY);
        }
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `||[rho, O]||_inf`; zero exactly when the two commute.
pub fn commutator_advantage(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    Ok(spectral_norm(&commutator(rho.matrix(), o.matrix())?))
}

/// Frobenius norm of `[rho, O]`, reported alongside the spectral score.
pub fn commutator_frobenius(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    Ok(commutator(rho.matrix(), o.matrix())?.frobenius_norm())
}

/// Single-qubit Bloch vector `r` with `rho = (I + r . sigma) / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !(len <= 1.0 + 1e-10) {
            return Err(Error::InvalidArgument(format!("Bloch vector length {len} exceeds 1")));
        }
        Ok(Self(r))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        let [x, y, z] = self.0;
        (x * x + y * y + z * z).sqrt()
    }

    pub fn to_density(&self) -> DensityMatrix {
        let [x, y, z] = self.0;
        let mut m = ComplexMatrix::identity(2);
        for (c, p) in [(x, pauli_x()), (y, pauli_y()), (z, pauli_z())] {
            m = &m + &p.scale_real(c);
        }
        DensityMatrix(m.scale_real(0.5))
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        check_dim(2, rho.dim())?;
        let m = rho.matrix();
        let off = m[(1, 0)];
        Ok(Self([2.0 * off.re, 2.0 * off.im, (m[(0, 0)] - m[(1, 1)]).re]))
    }
}

/// `H = -sum_{i<j} w_ij Z_i Z_j - sum_i b_i X_i` on `n` qubits. Qubit `i`
/// acts on bit `i` of the basis index (qubit 0 is the rightmost factor).
pub fn transverse_field_hamiltonian(w: &[Vec<f64>], b: &[f64]) -> Result<Observable> {
    let n = b.len();
    if n == 0 {
        return Err(Error::InvalidArgument("at least one qubit is required".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::TooLarge { size: n, limit: MAX_QUBITS });
    }
    check_dim(n, w.len())?;
    for (i, row) in w.iter().enumerate() {
        check_dim(n, row.len())?;
        if row[i] != 0.0 {
            return Err(Error::InvalidArgument(format!("w[{i}][{i}] must be zero")));
        }
        for j in 0..i {
            if row[j] != w[j][i] {
                return Err(Error::InvalidArgument(format!("w is not symmetric at ({i}, {j})")));
            }
        }
    }
    let id2 = ComplexMatrix::identity(2);
    let on_qubit = |q: usize, op: &ComplexMatrix| {
        (0..n).rev().fold(ComplexMatrix::identity(1), |acc, k| {
            kron(&acc, if k == q { op } else { &id2 })
        })
    };
    let dim = 1usize << n;
    let mut h = ComplexMatrix::zeros(dim);
    let z = pauli_z();
    let x = pauli_x();
    let z_ops: Vec<ComplexMatrix> = (0..n).map(|q| on_qubit(q, &z)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if w[i][j] != 0.0 {
                h = &h - &z_ops[i].matmul(&z_ops[j]).scale_real(w[i][j]);
            }
        }
        if b[i] != 0.0 {
            h = &h - &on_qubit(i, &x).scale_real(b[i]);
        }
    }
    Ok(Observable(h))
}

/// `|psi> = sum_i c_i |u_i>_v (x) |w_i>_h` with `c` descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtDecomposition {
    /// `min(d_v, d_h)` coefficients, descending.
    pub coefficients: Vec<f64>,
    /// First `rank` left vectors (visible factor).
    pub left_basis: Vec<Vec<C64>>,
    /// First `rank` right vectors (hidden factor).
    pub right_basis: Vec<Vec<C64>>,
    pub rank: usize,
    pub dims: (usize, usize),
}

/// Coefficients at or below this value do not count toward the rank.
pub const SCHMIDT_RANK_TOL: f64 = 1e-10;

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> Vec<C64> {
        let (dv, dh) = self.dims;
        let mut psi = alloc::vec![C64::default(); dv * dh];
        for k in 0..self.rank {
            for a in 0..dv {
                for b in 0..dh {
                    psi[a * dh + b] += self.left_basis[k][a] * self.right_basis[k][b] * self.coefficients[k];
                }
            }
        }
        psi
    }
}

/// Schmidt form of a unit vector in `C^{d_v} (x) C^{d_h}` (index
/// `a * d_h + b`), obtained from the spectrum of the visible reduced state.
pub fn schmidt_decompose(psi: &[C64], (dv, dh): (usize, usize)) -> Result<SchmidtDecomposition> {
    if dv == 0 || dh == 0 {
        return Err(Error::InvalidArgument("factor dimensions must be positive".into()));
    }
    check_dim(dv * dh, psi.len())?;
    let norm = state_norm(psi);
    if (norm - 1.0).abs() > HERMITIAN_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let reduced = ComplexMatrix::from_fn(dv, |a, c| {
        (0..dh).map(|b| psi[a * dh + b] * psi[c * dh + b].conj()).sum()
    });
    let e = eig_hermitian(&reduced)?;
    let keep = dv.min(dh);
    let mut coefficients = Vec::with_capacity(keep);
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for k in (0..dv).rev().take(keep) {
        let c = e.eigenvalues[k].max(0.0).sqrt();
        coefficients.push(c);
        if c > SCHMIDT_RANK_TOL {
            let u = e.eigenvector(k);
            let w: Vec<C64> = (0..dh)
                .map(|b| (0..dv).map(|a| u[a].conj() * psi[a * dh + b]).sum::<C64>() / c)
                .collect();
            left_basis.push(u);
            right_basis.push(w);
        }
    }
    let rank = left_basis.len();
    Ok(SchmidtDecomposition { coefficients, left_basis, right_basis, rank, dims: (dv, dh) })
}

/// `Tr_h |psi><psi|` as a density matrix.
pub fn reduced_visible(psi: &[C64], dims: (usize, usize)) -> Result<DensityMatrix> {
    let norm = state_norm(psi);
    if (norm - 1.0).abs() > HERMITIAN_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let full = ComplexMatrix::outer(psi);
    DensityMatrix::new(kernel::partial_trace(&full, dims, Subsystem::Visible)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boltzmann::{kl_divergence, ProbabilityDistribution};
    use crate::sample;
    use core::f64::consts::{FRAC_1_SQRT_2, LN_2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn density_validation_names_invariant() {
        let low_trace = ComplexMatrix::from_diagonal(&[0.5, 0.4]);
        assert_eq!(DensityMatrix::new(low_trace), Err(Error::InvalidDensity("trace")));
        let negative = ComplexMatrix::from_diagonal(&[1.5, -0.5]);
        assert_eq!(DensityMatrix::new(negative), Err(Error::InvalidDensity("positivity")));
        let skew = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn thermal_state_examples() {
        let zero = Observable::from_diagonal(&[0.0, 0.0]);
        let rho = density_from_hamiltonian(&zero, 3.0).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        let h = Observable::new(pauli_x().scale_real(-1.0)).unwrap();
        let r = BlochVector::from_density(&density_from_hamiltonian(&h, 1.0).unwrap()).unwrap();
        let [x, y, z] = r.components();
        assert!((x - 1.0_f64.tanh()).abs() < 1e-14 && y.abs() < 1e-14 && z.abs() < 1e-14);
        assert!((x - 0.7616).abs() < 1e-4);

        let rho = density_from_hamiltonian(&Observable::from_diagonal(&[0.0, 1.0]), 50.0).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0])) < 1e-10);
    }

    #[test]
    fn thermal_states_are_valid_densities() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..40 {
            let n = 2 + trial % 7;
            let h = Observable::new(sample::random_hermitian(n, &mut rng)).unwrap();
            let beta = rng.random_range(1e-3..=50.0);
            let rho = density_from_hamiltonian(&h, beta).unwrap();
            assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn expectation_examples() {
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(expectation(&mixed, &Observable::new(pauli_z()).unwrap()).unwrap(), 0.0);
        let plus = BlochVector::new([1.0, 0.0, 0.0]).unwrap().to_density();
        let x = Observable::new(pauli_x()).unwrap();
        assert!((expectation(&plus, &x).unwrap() - 1.0).abs() < 1e-15);
        let p = [0.1, 0.2, 0.3, 0.4];
        let o = [3.0, -1.0, 0.5, 2.0];
        let rho = DensityMatrix::from_probabilities(&p).unwrap();
        let classical: f64 = p.iter().zip(&o).map(|(a, b)| a * b).sum();
        assert_eq!(expectation(&rho, &Observable::from_diagonal(&o)).unwrap(), classical);
        assert!(expectation(&rho, &x).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = DensityMatrix::new(sample::ginibre_density(4, &mut rng)).unwrap();
        assert!(quantum_relative_entropy(&rho, &rho).unwrap() < 1e-12);

        let point = DensityMatrix::from_probabilities(&[1.0, 0.0]).unwrap();
        let half = DensityMatrix::maximally_mixed(2);
        let s = quantum_relative_entropy(&point, &half).unwrap();
        assert!((s - LN_2).abs() < 1e-15);
        let classical = kl_divergence(
            &ProbabilityDistribution::new(alloc::vec![1.0, 0.0]).unwrap(),
            &ProbabilityDistribution::uniform(2),
        )
        .unwrap();
        assert!((s - classical).abs() < 1e-15);

        let one = DensityMatrix::from_probabilities(&[0.0, 1.0]).unwrap();
        assert_eq!(quantum_relative_entropy(&point, &one).unwrap(), f64::INFINITY);
    }

    #[test]
    fn relative_entropy_is_nonnegative_on_ginibre_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for trial in 0..1000 {
            let n = 2 + trial % 5;
            let rho = DensityMatrix::new(sample::ginibre_density(n, &mut rng)).unwrap();
            let sigma = DensityMatrix::new(sample::ginibre_density(n, &mut rng)).unwrap();
            let s = quantum_relative_entropy(&rho, &sigma).unwrap();
            assert!(s >= 0.0 && s.is_finite());
            assert!(s > 1e-10, "distinct states should be separated");
        }
    }

    #[test]
    fn commutator_advantage_examples() {
        let z = Observable::new(pauli_z()).unwrap();
        let up = BlochVector::new([0.0, 0.0, 1.0]).unwrap().to_density();
        assert_eq!(commutator_advantage(&up, &z).unwrap(), 0.0);
        let plus = BlochVector::new([1.0, 0.0, 0.0]).unwrap().to_density();
        assert!((commutator_advantage(&plus, &z).unwrap() - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let o = Observable::new(sample::random_hermitian(3, &mut rng)).unwrap();
        assert!(commutator_advantage(&DensityMatrix::maximally_mixed(3), &o).unwrap() < 1e-15);
    }

    #[test]
    fn bloch_examples() {
        let origin = BlochVector::new([0.0; 3]).unwrap().to_density();
        assert_eq!(origin, DensityMatrix::maximally_mixed(2));
        let plus = BlochVector::new([1.0, 0.0, 0.0]).unwrap().to_density();
        assert!((plus.purity() - 1.0).abs() < 1e-15);
        assert!(BlochVector::new([1.0, 1.0, 0.0]).is_err());
        assert!(BlochVector::from_density(&DensityMatrix::maximally_mixed(3)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let v = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
            let r = BlochVector::new(v).unwrap();
            let back = BlochVector::from_density(&r.to_density()).unwrap().components();
            assert!(back.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-14));
            let purity = r.to_density().purity();
            assert!((purity - 0.5 * (1.0 + r.norm() * r.norm())).abs() < 1e-14);
        }
    }

    #[test]
    fn transverse_field_examples() {
        let h = transverse_field_hamiltonian(&[alloc::vec![0.0]], &[1.0]).unwrap();
        assert_eq!(*h.matrix(), pauli_x().scale_real(-1.0));

        let w = [alloc::vec![0.0, 1.0], alloc::vec![1.0, 0.0]];
        let h = transverse_field_hamiltonian(&w, &[0.0, 0.0]).unwrap();
        assert_eq!(*h.matrix(), ComplexMatrix::from_diagonal(&[-1.0, 1.0, 1.0, -1.0]));

        // Field on qubit 0 flips bit 0.
        let h = transverse_field_hamiltonian(&[alloc::vec![0.0; 2], alloc::vec![0.0; 2]], &[1.0, 0.0]).unwrap();
        assert_eq!(h.matrix()[(0, 1)], c(-1.0));
        assert_eq!(h.matrix()[(0, 2)], c(0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 3;
        let mut w = alloc::vec![alloc::vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                w[i][j] = rng.random::<f64>();
                w[j][i] = w[i][j];
            }
        }
        let h = transverse_field_hamiltonian(&w, &[0.0; 3]).unwrap();
        assert!(h.matrix().is_diagonal(0.0));
        let rho = DensityMatrix::from_probabilities(&[0.1, 0.2, 0.05, 0.15, 0.1, 0.1, 0.2, 0.1]).unwrap();
        assert_eq!(commutator_advantage(&rho, &h).unwrap(), 0.0);

        assert!(matches!(
            transverse_field_hamiltonian(&alloc::vec![alloc::vec![0.0; 11]; 11], &[0.0; 11]),
            Err(Error::TooLarge { .. })
        ));
        let asym = [alloc::vec![0.0, 1.0], alloc::vec![2.0, 0.0]];
        assert!(transverse_field_hamiltonian(&asym, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let product = [c(0.0), c(1.0), c(0.0), c(0.0)];
        let s = schmidt_decompose(&product, (2, 2)).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-15);

        let bell = [c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)];
        let s = schmidt_decompose(&bell, (2, 2)).unwrap();
        assert_eq!(s.rank, 2);
        assert!(s.coefficients.iter().all(|x| (x - FRAC_1_SQRT_2).abs() < 1e-15));

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let psi = sample::random_state(16, &mut rng);
        let s = schmidt_decompose(&psi, (2, 8)).unwrap();
        assert!(s.rank <= 2);
        let err = s.reconstruct().iter().zip(&psi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);

        assert!(matches!(schmidt_decompose(&bell, (2, 3)), Err(Error::DimMismatch { .. })));
        let unnormalized = [c(1.0), c(1.0), c(0.0), c(0.0)];
        assert!(matches!(schmidt_decompose(&unnormalized, (2, 2)), Err(Error::NotNormalized { .. })));
    }
}
