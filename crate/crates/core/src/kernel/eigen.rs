//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit QL iterations with Wilkinson
//! shifts. Output is deterministic for identical input.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::matrix::{ComplexMatrix, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Spectral decomposition `M = V diag(eigenvalues) V^H`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal eigenvectors, in eigenvalue order.
    pub basis: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(lambda)) V^H`.
    pub fn reassemble_with(&self, f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().copied().map(f).collect();
        self.reassemble_from(&values)
    }

    /// `V diag(values) V^H` for replacement eigenvalues in basis order.
    pub fn reassemble_from(&self, values: &[f64]) -> ComplexMatrix {
        let v = &self.basis;
        let n = v.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * values[k]).sum()
        })
    }

    pub fn reassemble(&self) -> ComplexMatrix {
        self.reassemble_with(|x| x)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.basis.column(k)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Diagonalizes `m`, reading only its Hermitian part. Callers are
/// responsible for validating Hermiticity.
pub(crate) fn hermitian_eigen(m: &ComplexMatrix) -> EigenDecomposition {
    let n = m.dim();
    let mut a: Vec<C64> = m.hermitian_part().as_slice().to_vec();
    let mut q: Vec<C64> = ComplexMatrix::identity(n).as_slice().to_vec();

    tridiagonalize(n, &mut a, &mut q);

    let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut off = vec![0.0; n];
    // Diagonal phase similarity making every sub-diagonal entry real and nonnegative.
    let mut phase = vec![C64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let e = a[(k + 1) * n + k];
        let modulus = e.norm();
        off[k] = modulus;
        phase[k + 1] = if modulus > 0.0 { phase[k] * (e / modulus) } else { phase[k] };
    }

    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(n, &mut diag, &mut off, &mut z);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));

    // basis = Q * diag(phase) * Z, columns permuted into ascending order.
    let basis = ComplexMatrix::from_fn(n, |i, col| {
        let j = order[col];
        (0..n).map(|k| q[i * n + k] * phase[k] * z[k * n + j]).sum()
    });
    let eigenvalues = order.iter().map(|&j| diag[j]).collect();
    EigenDecomposition { eigenvalues, basis }
}

/// Reduces Hermitian `a` (row-major, n x n) in place to tridiagonal form
/// `T = Q^H A Q`, accumulating the unitary into `q`.
fn tridiagonalize(n: usize, a: &mut [C64], q: &mut [C64]) {
    let mut v = vec![C64::zero(); n];
    let mut p = vec![C64::zero(); n];
    let mut qv = vec![C64::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let head = a[(k + 1) * n + k];
        let norm = (tail + head.norm_sqr()).sqrt();
        let unit = if head.norm() > 0.0 { head / head.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -unit * norm;

        v.iter_mut().for_each(|x| *x = C64::zero());
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= vnorm);

        // A <- H A H with H = I - 2 v v^H, using p = A v and w = p - (v^H p) v.
        for i in 0..n {
            p[i] = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        let kappa: f64 = (k + 1..n).map(|i| (v[i].conj() * p[i]).re).sum();
        for i in 0..n {
            p[i] -= v[i] * kappa;
        }
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] -= (v[i] * p[j].conj() + p[i] * v[j].conj()) * 2.0;
            }
        }

        // Q <- Q H
        for i in 0..n {
            qv[i] = (k + 1..n).map(|j| q[i * n + j] * v[j]).sum();
        }
        for i in 0..n {
            for j in k + 1..n {
                q[i * n + j] -= qv[i] * v[j].conj() * 2.0;
            }
        }
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (`e[i]` couples `i` and `i + 1`). Rotations are
/// accumulated into the columns of `z`.
fn tridiagonal_ql(n: usize, d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    const MAX_ITER: usize = 200;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l || iter == MAX_ITER {
                break;
            }
            iter += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk1 = z[k * n + i + 1];
                    let zk = z[k * n + i];
                    z[k * n + i + 1] = s * zk + c * zk1;
                    z[k * n + i] = c * zk - s * zk1;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
