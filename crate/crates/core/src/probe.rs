//! Optimal probe states for an observable.
//!
//! In the eigenbasis of `O`, the traceless part splits into positive
//! eigenvalues `a_i` and negative eigenvalues `-b_j` with
//! `sum a_i = t = sum b_j`. The two-component generator `T` keeps `+t` at the
//! largest `a_i` and `-t` at the largest `b_j`. The pure state spread evenly
//! over those two levels, with its Bloch vector transverse to `T` inside that
//! subspace, maximizes `||[rho, O]||_inf`. The value reached is
//! `(max a_i + max b_j) / 2`, half the spectral width of `O`.
//!
//! [`oracle_max_pure`] searches pure states by Nelder-Mead as an independent
//! check of that construction.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::{eig_hermitian, spectral_norm, ComplexMatrix, C64, DEGENERACY_TOL};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::qstate::{
    commutator_advantage, schmidt_decompose, reduced_visible, DensityMatrix, Observable,
};
use crate::sample;
#[allow(unused_imports)]
use num_traits::Float;

/// Split of an observable's traceless spectrum into positive and negative
/// groups. Positions index columns of `eigenbasis`; an observable that is
/// already diagonal keeps the identity basis, so positions are its own
/// diagonal indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanSplit {
    /// Coefficient of the identity, `Tr[O] / n`.
    pub trace_part: f64,
    /// Eigenvalues of `O` by position.
    pub spectrum: Vec<f64>,
    /// `(position, a_i)` with `a_i > 0`, ascending by position.
    pub pos: Vec<(usize, f64)>,
    /// `(position, b_j)` with `-b_j` the traceless eigenvalue, `b_j > 0`.
    pub neg: Vec<(usize, f64)>,
    pub zeros: Vec<usize>,
    pub t: f64,
    pub eigenbasis: ComplexMatrix,
}

impl CartanSplit {
    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }
}

pub fn cartan_split(o: &Observable) -> Result<CartanSplit> {
    let n = o.dim();
    if n < 2 {
        return Err(Error::InvalidArgument("observable must have dimension at least 2".into()));
    }
    let (spectrum, eigenbasis) = if o.matrix().is_diagonal(0.0) {
        (o.matrix().diagonal().iter().map(|z| z.re).collect::<Vec<_>>(), ComplexMatrix::identity(n))
    } else {
        let e = eig_hermitian(o.matrix())?;
        (e.eigenvalues, e.basis)
    };
    let trace_part = spectrum.iter().sum::<f64>() / n as f64;
    let scale = spectrum.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let tol = DEGENERACY_TOL * scale;

    let (mut pos, mut neg, mut zeros) = (Vec::new(), Vec::new(), Vec::new());
    for (k, &x) in spectrum.iter().enumerate() {
        let centered = x - trace_part;
        if centered > tol {
            pos.push((k, centered));
        } else if centered < -tol {
            neg.push((k, -centered));
        } else {
            zeros.push(k);
        }
    }
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::ZeroTraceless);
    }
    let t = 0.5 * (pos.iter().map(|p| p.1).sum::<f64>() + neg.iter().map(|p| p.1).sum::<f64>());
    Ok(CartanSplit { trace_part, spectrum, pos, neg, zeros, t, eigenbasis })
}

/// Two-component generator `T = diag(..., t, ..., -t, ...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub i_star: usize,
    pub j_star: usize,
    pub diagonal: Vec<f64>,
}

/// Places `+t` at the largest `a_i` and `-t` at the largest `b_j`; ties go
/// to the lowest position.
pub fn construct_t(split: &CartanSplit) -> Generator {
    let argmax = |group: &[(usize, f64)]| {
        group.iter().fold(group[0], |best, &c| if c.1 > best.1 { c } else { best }).0
    };
    let i_star = argmax(&split.pos);
    let j_star = argmax(&split.neg);
    let mut diagonal = vec![0.0; split.dim()];
    diagonal[i_star] = split.t;
    diagonal[j_star] = -split.t;
    Generator { i_star, j_star, diagonal }
}

/// Amplitude on every transverse probe level.
pub const PROBE_COEFFICIENT: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConstruction {
    pub split: CartanSplit,
    pub i_star: usize,
    pub j_star: usize,
    pub t_diagonal: Vec<f64>,
    /// Azimuth of the transverse direction in the `{i_star, j_star}` plane, in `[0, 2pi)`.
    pub phi: f64,
    /// Length of the transverse Bloch component.
    pub c: f64,
    /// Probe in the input basis.
    pub rho_star: DensityMatrix,
    /// Probe in the eigenbasis of the observable.
    pub rho_star_eigen: DensityMatrix,
    pub achieved_norm: f64,
}

impl ProbeConstruction {
    /// `(|i*> + e^{i phi} |j*>) / sqrt 2` in the eigenbasis.
    pub fn eigen_state(&self) -> Vec<C64> {
        probe_vector(self.split.dim(), self.i_star, self.j_star, self.phi)
    }
}

fn probe_vector(n: usize, i: usize, j: usize, phi: f64) -> Vec<C64> {
    let mut psi = vec![C64::default(); n];
    psi[i] = C64::new(FRAC_1_SQRT_2, 0.0);
    psi[j] = C64::from_polar(FRAC_1_SQRT_2, phi);
    psi
}

pub fn optimal_probe(o: &Observable, phi: f64) -> Result<ProbeConstruction> {
    let split = cartan_split(o)?;
    let generator = construct_t(&split);
    let phi = num_traits::Euclid::rem_euclid(&phi, &TAU);
    let psi = probe_vector(split.dim(), generator.i_star, generator.j_star, phi);
    let rho_star_eigen = DensityMatrix::pure(&psi)?;
    let rho_star = if split.eigenbasis == ComplexMatrix::identity(split.dim()) {
        rho_star_eigen.clone()
    } else {
        rho_star_eigen.rotated(&split.eigenbasis)
    };
    let achieved_norm = commutator_advantage(&rho_star, o)?;
    Ok(ProbeConstruction {
        split,
        i_star: generator.i_star,
        j_star: generator.j_star,
        t_diagonal: generator.diagonal,
        phi,
        c: PROBE_COEFFICIENT,
        rho_star,
        rho_star_eigen,
        achieved_norm,
    })
}

pub const ORACLE_MAX_DIM: usize = 32;
pub const DEFAULT_RESTARTS: usize = 200;

/// Best point of one oracle restart.
#[derive(Clone, Debug, PartialEq)]
pub struct RestartOutcome {
    pub restart: usize,
    pub norm: f64,
    pub state: Vec<C64>,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn coordinates_to_state(x: &[f64]) -> Option<Vec<C64>> {
    let psi: Vec<C64> = x.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
    let norm = crate::qstate::state_norm(&psi);
    if !(norm > 0.0 && norm.is_finite()) {
        return None;
    }
    Some(psi.into_iter().map(|z| z / norm).collect())
}

fn pure_score(o: &Observable, psi: &[C64]) -> f64 {
    let rho = DensityMatrix::pure(psi).expect("normalized by construction");
    commutator_advantage(&rho, o).expect("dimensions agree")
}

/// One Nelder-Mead run over `2 * dim` real coordinates from a seeded random
/// start; every evaluation renormalizes the coordinates into a unit vector.
pub fn oracle_restart(o: &Observable, seed: u64, restart: usize, options: &NelderMeadOptions) -> RestartOutcome {
    let mut rng = restart_rng(seed, restart);
    let start: Vec<f64> = sample::random_state(o.dim(), &mut rng)
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect();
    let objective = |x: &[f64]| coordinates_to_state(x).map_or(0.0, |psi| -pure_score(o, &psi));
    let best = nelder_mead(objective, &start, options);
    let state = coordinates_to_state(&best.x).unwrap_or_else(|| {
        let mut e0 = vec![C64::default(); o.dim()];
        e0[0] = C64::new(1.0, 0.0);
        e0
    });
    RestartOutcome { restart, norm: pure_score(o, &state), state }
}

/// Largest norm; equal norms resolve to the lowest restart index, so the
/// result does not depend on evaluation order.
pub fn best_restart<I: IntoIterator<Item = RestartOutcome>>(outcomes: I) -> Option<RestartOutcome> {
    outcomes.into_iter().fold(None, |best: Option<RestartOutcome>, c| match best {
        Some(b) if b.norm > c.norm || (b.norm == c.norm && b.restart < c.restart) => Some(b),
        _ => Some(c),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub state: DensityMatrix,
    pub vector: Vec<C64>,
    pub norm: f64,
    pub restart: usize,
}

/// Rejects observables too large for the search and an empty restart budget.
pub fn check_oracle_input(o: &Observable, restarts: usize) -> Result<()> {
    if o.dim() > ORACLE_MAX_DIM {
        return Err(Error::TooLarge { size: o.dim(), limit: ORACLE_MAX_DIM });
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    Ok(())
}

impl OracleResult {
    pub fn from_outcome(best: RestartOutcome) -> Result<Self> {
        Ok(Self {
            state: DensityMatrix::pure(&best.state)?,
            vector: best.state,
            norm: best.norm,
            restart: best.restart,
        })
    }
}

/// Brute-force maximum of `||[rho, O]||_inf` over pure states.
pub fn oracle_max_pure(o: &Observable, restarts: usize, seed: u64) -> Result<OracleResult> {
    check_oracle_input(o, restarts)?;
    let options = NelderMeadOptions::default();
    let best = best_restart((0..restarts).map(|k| oracle_restart(o, seed, k, &options)))
        .expect("at least one restart");
    OracleResult::from_outcome(best)
}

/// Nelder-Mead search over mixed states `A A^H / Tr(A A^H)` with `A` a full
/// complex matrix. Used to probe whether any mixed state beats the pure
/// optimum.
pub fn oracle_max_mixed(
    o: &Observable,
    restarts: usize,
    seed: u64,
    options: &NelderMeadOptions,
) -> Result<(DensityMatrix, f64)> {
    check_oracle_input(o, restarts)?;
    let n = o.dim();
    let to_density = |x: &[f64]| -> Option<DensityMatrix> {
        let a = ComplexMatrix::from_fn(n, |i, j| C64::new(x[2 * (i * n + j)], x[2 * (i * n + j) + 1]));
        let aa = a.matmul(&a.adjoint()).hermitian_part();
        let tr = aa.trace().re;
        if !(tr > 0.0 && tr.is_finite()) {
            return None;
        }
        DensityMatrix::new(aa.scale_real(1.0 / tr)).ok()
    };
    let mut best: Option<(DensityMatrix, f64)> = None;
    for k in 0..restarts {
        let mut rng = restart_rng(seed, k);
        let g = sample::ginibre(n, &mut rng);
        let start: Vec<f64> = g.as_slice().iter().flat_map(|z| [z.re, z.im]).collect();
        let objective = |x: &[f64]| {
            to_density(x).map_or(0.0, |rho| -commutator_advantage(&rho, o).expect("dims agree"))
        };
        let found = nelder_mead(objective, &start, options);
        if let Some(rho) = to_density(&found.x) {
            let norm = commutator_advantage(&rho, o)?;
            if best.as_ref().is_none_or(|b| norm > b.1) {
                best = Some((rho, norm));
            }
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("mixed-state search produced no valid state".into()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiReport {
    pub qfi: f64,
    /// `1 / qfi`, or `+inf` when the probe is insensitive.
    pub cramer_rao: f64,
}

const QFI_FLOOR: f64 = 1e-12;

/// Symmetric-logarithmic-derivative quantum Fisher information of
/// `theta -> exp(-i theta O) rho exp(i theta O)`.
pub fn qfi_unitary_encoding(rho: &DensityMatrix, o: &Observable) -> Result<QfiReport> {
    if rho.dim() != o.dim() {
        return Err(Error::DimMismatch { expected: rho.dim(), found: o.dim() });
    }
    let e = eig_hermitian(rho.matrix())?;
    let o_eig = o.matrix().conjugate_by(&e.basis);
    let lambda = &e.eigenvalues;
    let n = rho.dim();
    let mut qfi = 0.0;
    for k in 0..n {
        for l in 0..n {
            let sum = lambda[k] + lambda[l];
            if sum > QFI_FLOOR {
                let diff = lambda[k] - lambda[l];
                qfi += 2.0 * diff * diff / sum * o_eig[(k, l)].norm_sqr();
            }
        }
    }
    let cramer_rao = if qfi < QFI_FLOOR { f64::INFINITY } else { 1.0 / qfi };
    Ok(QfiReport { qfi, cramer_rao })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    /// Commutator score of the visible reduced state.
    pub visible_norm: f64,
    /// Score of the optimal pure visible probe.
    pub pure_max: f64,
    pub gap: f64,
    pub schmidt_rank: usize,
}

/// Compares the reduced visible state of a bipartite pure state against the
/// optimal pure probe for an observable on the visible factor.
pub fn mixed_vs_pure_gap(psi: &[C64], dims: (usize, usize), o: &Observable) -> Result<GapReport> {
    if o.dim() != dims.0 {
        return Err(Error::DimMismatch { expected: dims.0, found: o.dim() });
    }
    let schmidt = schmidt_decompose(psi, dims)?;
    let visible = reduced_visible(psi, dims)?;
    let visible_norm = commutator_advantage(&visible, o)?;
    let pure_max = optimal_probe(o, 0.0)?.achieved_norm;
    Ok(GapReport { visible_norm, pure_max, gap: pure_max - visible_norm, schmidt_rank: schmidt.rank })
}

/// Half the spectral width `(lambda_max - lambda_min) / 2`; equals the
/// achieved norm of [`optimal_probe`].
pub fn half_spectral_width(o: &Observable) -> Result<f64> {
    let e = eig_hermitian(o.matrix())?;
    Ok(0.5 * (e.max_eigenvalue() - e.min_eigenvalue()))
}

/// Spectral norm of the traceless part of `O`.
pub fn traceless_norm(o: &Observable) -> f64 {
    let shift = o.matrix().trace().re / o.dim() as f64;
    spectral_norm(o.shifted(-shift).matrix())
}
