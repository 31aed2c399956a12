//! Dense complex Hermitian linear algebra.

mod eigen;
mod matrix;

use alloc::vec::Vec;


pub use eigen::EigenDecomposition;
pub use matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix, C64};

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Maximum entrywise `|M - M^H|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative threshold below which eigenvalues are treated as exact zeros.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Checks Hermiticity and returns the exactly Hermitian part.
pub fn hermitian_checked(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let deviation = m.hermiticity_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(m.hermitian_part())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let h = hermitian_checked(m)?;
    Ok(eigen::hermitian_eigen(&h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFunction {
    Log,
    Exp,
}

/// Natural logarithm of a PSD matrix in spectral form. Eigenvalues below
/// `DEGENERACY_TOL * max` carry `f64::NEG_INFINITY`.
#[derive(Clone, Debug)]
pub struct SpectralLog {
    pub decomposition: EigenDecomposition,
    pub log_eigenvalues: Vec<f64>,
}

impl SpectralLog {
    pub fn is_finite(&self) -> bool {
        self.log_eigenvalues.iter().all(|x| x.is_finite())
    }

    /// Indices (into the ascending spectrum) of the kernel.
    pub fn kernel(&self) -> impl Iterator<Item = usize> + '_ {
        self.log_eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_finite())
            .map(|(k, _)| k)
    }

    pub fn to_matrix(&self) -> Option<ComplexMatrix> {
        if !self.is_finite() {
            return None;
        }
        Some(self.decomposition.reassemble_from(&self.log_eigenvalues))
    }
}

pub fn spectral_log(m: &ComplexMatrix) -> Result<SpectralLog> {
    let decomposition = eig_hermitian(m)?;
    let min = decomposition.min_eigenvalue();
    if min < -DEGENERACY_TOL {
        return Err(Error::NegativeSpectrum { eigenvalue: min });
    }
    let cutoff = DEGENERACY_TOL * decomposition.max_eigenvalue().max(0.0);
    let log_eigenvalues = decomposition
        .eigenvalues
        .iter()
        .map(|&x| if x <= cutoff { f64::NEG_INFINITY } else { x.ln() })
        .collect();
    Ok(SpectralLog { decomposition, log_eigenvalues })
}

/// Applies `log` or `exp` through the eigenbasis. The logarithm of a
/// singular matrix is reported as `SingularLogarithm`; use [`spectral_log`]
/// to work with the unbounded kernel directly.
pub fn matrix_function(m: &ComplexMatrix, f: MatrixFunction) -> Result<ComplexMatrix> {
    match f {
        MatrixFunction::Exp => Ok(eig_hermitian(m)?.reassemble_with(f64::exp)),
        MatrixFunction::Log => spectral_log(m)?.to_matrix().ok_or(Error::SingularLogarithm),
    }
}

/// Largest singular value (Schatten-infinity norm).
///
/// Hermitian and anti-Hermitian inputs are diagonalized directly so small
/// norms keep full absolute precision; everything else goes through the
/// Gram matrix `M^H M`.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let tight = 1e-14 * scale;
    if m.hermiticity_defect() <= tight {
        let e = eigen::hermitian_eigen(m);
        return e.max_eigenvalue().abs().max(e.min_eigenvalue().abs());
    }
    let i_m = m.scale(C64::new(0.0, 1.0));
    if i_m.hermiticity_defect() <= tight {
        let e = eigen::hermitian_eigen(&i_m);
        return e.max_eigenvalue().abs().max(e.min_eigenvalue().abs());
    }
    let gram = m.adjoint().matmul(m);
    eigen::hermitian_eigen(&gram).max_eigenvalue().max(0.0).sqrt()
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dims(b)?;
    Ok(&a.matmul(b) - &b.matmul(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    /// First tensor factor.
    Visible,
    /// Second tensor factor.
    Hidden,
}

/// Partial trace over one factor of `C^{d_v} (x) C^{d_h}`, keeping `keep`.
pub fn partial_trace(
    m: &ComplexMatrix,
    (dv, dh): (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if dv == 0 || dh == 0 || dv * dh != m.dim() {
        return Err(Error::DimMismatch { expected: dv * dh, found: m.dim() });
    }
    Ok(match keep {
        Subsystem::Visible => ComplexMatrix::from_fn(dv, |a, b| {
            (0..dh).map(|h| m[(a * dh + h, b * dh + h)]).sum()
        }),
        Subsystem::Hidden => ComplexMatrix::from_fn(dh, |a, b| {
            (0..dv).map(|v| m[(v * dh + a, v * dh + b)]).sum()
        }),
    })
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let db = b.dim();
    ComplexMatrix::from_fn(a.dim() * db, |i, j| a[(i / db, j / db)] * b[(i % db, j % db)])
}
