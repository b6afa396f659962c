//! Exact thermodynamic-limit dynamics of a qubit coupled to a thermal spin
//! bath.
//!
//! The reduced dynamics is an affine map on the Bloch ball,
//! `v(t) = T(t) v(0) + r(t)`, whose transfer matrix `T` and inhomogeneity
//! vector `r` are thermal averages over bosonic bath occupations of
//! Jaynes–Cummings-like mode amplitudes. On top of the channel the crate
//! provides:
//!
//! - Bures fidelity and angle, and a non-Markovianity measure built from the
//!   positive variation of the Bures angle between `Λ_t(I/2)` and
//!   `Λ_t(ρ_τ)` (see [`measures`]).
//! - Quantum Fisher information for product and entangled two-qubit probes
//!   (see [`qfi`]).
//! - CSV experiment drivers and a CLI (`spinbath`) reproducing the standard
//!   figures (see [`experiments`]).
//!
//! Units: the bath coupling `J` sets the energy scale, `k_B = 1` and times
//! are measured in `1/J`.

#![forbid(unsafe_code)]
// `!(x > 0.0)` guards are deliberate: they reject NaN too. Index loops
// mirror the matrix formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bloch;
pub mod error;
pub mod experiments;
pub mod measures;
pub mod numerics;
pub mod qfi;
pub mod reference;
pub mod selftest;
pub mod spin_bath;
pub mod sweep;

pub use bloch::{AffineQubitChannel, BlochVector, DensityMatrix2};
pub use error::{Error, Result};
pub use spin_bath::{PhaseConvention, SpinBath, SpinBathParams};
