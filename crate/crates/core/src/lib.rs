//! Spectral analysis of the Fibonacci quantum Ising chain via trace-map
//! dynamics.
//!
//! The chain couples spins with strengths J0/J1 arranged by the Fibonacci
//! substitution A ↦ AB, B ↦ A. Its excitation spectrum at periodic
//! approximant level k is governed by a three-term trace recursion, encoded
//! as the orbit of the trace map f(x,y,z) = (2xy − z, x, y) started on the
//! seed line γ_r(s). The crate computes, to controlled tolerance:
//!
//! - the level-k band sets σ̃_k = { s : |x_{k−1}(s)| ≤ 1 } and the nested
//!   three-level covers Σ_k approximating the limit spectrum ([`spectrum`]);
//! - certified escape classification of trace-map orbits ([`dynamics`]);
//! - exact free-fermion diagonalization and direct transfer-matrix products
//!   as independent cross-checks ([`fermion`]);
//! - box-counting dimension profiles of the band approximants ([`fractal`]);
//! - the trace-map identities themselves: invariant surfaces, symmetries,
//!   periodic curves, the torus factor map ([`tracemap`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature to use it in that mode. All computations are pure and
//! deterministic.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod fermion;
pub mod fibword;
pub mod fractal;
pub mod linalg;
pub mod spectrum;
pub mod tracemap;

mod dd;
mod math;

pub use error::{CoreError, Result};
pub use math::rel_residual;
pub use tracemap::{CouplingParams, SpectralVariable, TracePoint};
