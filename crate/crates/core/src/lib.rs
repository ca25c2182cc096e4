//! Simulation of the one-clean-qubit (DQC1) circuit.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised in four layers:
//!
//! - [`numerics`]: dense complex matrices, spectral routines, seeded random objects.
//! - [`circuit`]: the controlled-unitary circuit, exact final states and control marginals.
//! - [`measurement`]: shot-based trace estimation and the measurement-complexity model.
//! - [`entpower`]: entangling power in closed form, the decompositions behind it and
//!   brute-force searches that check the closed forms numerically.
//!
//! IO, configuration files and the command line live in the companion `dqc1` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod entpower;
mod error;
pub mod measurement;
pub mod numerics;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
