//! Register preparation of the optimal probe.
//!
//! The probe lives on two levels `i*` and `j*`. Relabel so they become the
//! register states `2k` and `2k + 1`, which differ only in the least
//! significant bit. From `|0...0>`, flip the qubits set in `2k`, rotate the
//! pair `(2k, 2k + 1)` by `pi/2`, and apply the relative phase. Counting each
//! abstract gate as one operation, this costs at most `m + 1` operations on an
//! `m`-qubit register.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::kernel::C64;
use crate::probe::ProbeConstruction;
use crate::qstate::DensityMatrix;
#[allow(unused_imports)]
use num_traits::Float;

/// Largest register the simulator accepts.
pub const MAX_REGISTER_QUBITS: usize = 20;
pub const PADDING_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// Pauli X on one qubit; qubit 0 is the least significant bit.
    FlipX { qubit: usize },
    /// Real rotation in the span of two basis states, taking `|a>` to
    /// `cos(angle/2) |a> + sin(angle/2) |b>`.
    TwoLevelRy { level_a: usize, level_b: usize, angle: f64 },
    /// Multiplies the amplitude of `level` by `exp(i angle)`.
    Phase { level: usize, angle: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateSequence {
    pub m: usize,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrepCircuit {
    pub sequence: GateSequence,
    /// `permutation[original] = register index`, a bijection on `0..2^m`.
    pub permutation: Vec<usize>,
    /// Number of levels of the observable; register states at or beyond this
    /// label are padding.
    pub levels: usize,
}

fn register_qubits(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Emits the preparation circuit for the probe's eigenbasis state
/// `(|i*> + e^{i phi} |j*>) / sqrt 2`, using the construction's azimuth.
pub fn prep_circuit(construction: &ProbeConstruction) -> PrepCircuit {
    let n = construction.split.dim();
    let m = register_qubits(n);
    let (i_star, j_star) = (construction.i_star, construction.j_star);
    let base = i_star & !1;

    let mut permutation: Vec<usize> = (0..1 << m).collect();
    for (label, slot) in [(i_star, base), (j_star, base + 1)] {
        let holder = permutation.iter().position(|&r| r == slot).expect("bijection");
        permutation.swap(label, holder);
    }

    let mut gates: Vec<Gate> = (1..m).filter(|q| base >> q & 1 == 1).map(|qubit| Gate::FlipX { qubit }).collect();
    gates.push(Gate::TwoLevelRy { level_a: base, level_b: base + 1, angle: FRAC_PI_2 });
    if construction.phi != 0.0 {
        gates.push(Gate::Phase { level: base + 1, angle: construction.phi });
    }
    PrepCircuit { sequence: GateSequence { m, gates }, permutation, levels: n }
}

/// Applies the gates in order to `|0...0>`.
pub fn simulate_gates(seq: &GateSequence) -> Result<Vec<C64>> {
    if seq.m > MAX_REGISTER_QUBITS {
        return Err(Error::TooLarge { size: seq.m, limit: MAX_REGISTER_QUBITS });
    }
    let levels = 1usize << seq.m;
    let check = |index: usize, bound: usize| {
        if index < bound { Ok(()) } else { Err(Error::IndexOutOfRange { index, levels: bound }) }
    };
    let mut psi = vec![C64::default(); levels];
    psi[0] = C64::new(1.0, 0.0);
    for gate in &seq.gates {
        match *gate {
            Gate::FlipX { qubit } => {
                check(qubit, seq.m)?;
                let bit = 1 << qubit;
                for i in (0..levels).filter(|i| i & bit == 0) {
                    psi.swap(i, i | bit);
                }
            }
            Gate::TwoLevelRy { level_a, level_b, angle } => {
                check(level_a, levels)?;
                check(level_b, levels)?;
                if level_a == level_b {
                    return Err(Error::InvalidArgument("rotation levels must differ".into()));
                }
                let (s, c) = (0.5 * angle).sin_cos();
                let (a, b) = (psi[level_a], psi[level_b]);
                psi[level_a] = a * c - b * s;
                psi[level_b] = a * s + b * c;
            }
            Gate::Phase { level, angle } => {
                check(level, levels)?;
                psi[level] *= C64::from_polar(1.0, angle);
            }
        }
    }
    Ok(psi)
}

/// Simulates the circuit, undoes the relabeling and returns the largest
/// entrywise deviation from `target`. Register states whose original label
/// is at least `target.dim()` must carry no amplitude.
pub fn verify_prep(seq: &GateSequence, target: &DensityMatrix, permutation: &[usize]) -> Result<f64> {
    let psi = simulate_gates(seq)?;
    let levels = psi.len();
    let n = target.dim();
    if n > levels {
        return Err(Error::DimMismatch { expected: levels, found: n });
    }
    if permutation.len() != levels {
        return Err(Error::DimMismatch { expected: levels, found: permutation.len() });
    }
    let mut seen = vec![false; levels];
    for &r in permutation {
        if r >= levels || core::mem::replace(&mut seen[r], true) {
            return Err(Error::InvalidArgument("permutation is not a bijection".into()));
        }
    }
    let leak = permutation[n..].iter().map(|&r| psi[r].norm()).fold(0.0, f64::max);
    if leak >= PADDING_TOL {
        return Err(Error::PaddingLeak { amplitude: leak });
    }
    let v: Vec<C64> = permutation[..n].iter().map(|&r| psi[r]).collect();
    let t = target.matrix();
    let mut deviation = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            deviation = deviation.max((v[i] * v[j].conj() - t[(i, j)]).norm());
        }
    }
    Ok(deviation)
}
