//! Numerics for small Boltzmann machines, density matrices and optimal
//! commutator probes.
//!
//! The crate is `no_std` and needs only `alloc`. Transcendental functions go
//! through `num_traits::Float`, which is backed by `libm` when `std` is absent.

#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod boltzmann;
pub mod kernel;
pub mod optim;
pub mod prep;
pub mod probe;
pub mod qstate;
pub mod sample;

pub use error::{Error, Result};
