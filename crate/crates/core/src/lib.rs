//! Laboratory for studying how learnable the output distributions of random
//! quantum circuits are.
//!
//! The crate provides, end to end:
//!
//! - exact Schrödinger state-vector simulation of random circuits built from
//!   the {√X, √Y, √W} single-qubit set plus CZ or fSim couplers
//!   ([`circuit`], [`simulator`]);
//! - the classical Porter-Thomas distribution family with integer, subset-parity
//!   and random-permutation orderings ([`porter_thomas`]);
//! - an exact deep-Boltzmann-machine representation of circuits, built
//!   gate by gate, with brute-force amplitude evaluation and size accounting
//!   ([`dbm`]);
//! - desk-scale generative baselines (autoregressive table model and
//!   product-Bernoulli model) trained on bitstring samples ([`learner`]);
//! - evaluation metrics: linear cross-entropy (XEB) fidelity, χ² goodness of
//!   fit, entropy, L1 distance, conditional-probability structure, and
//!   exponential curve fitting ([`metrics`]).
//!
//! # Conventions
//!
//! Qubit order is little-endian throughout: bit `q` of a basis index is the
//! state of qubit `q`, so qubit 0 is the least significant bit. In sample text
//! files qubit `n-1` is the leftmost character. Circuit depth counts cycles,
//! where a cycle is one layer of single-qubit gates followed by one layer of
//! two-qubit gates.
//!
//! All randomness flows through [`rng::Prng`], a fixed 64-bit xorshift-family
//! generator, so every pipeline is reproducible bit for bit from its seeds.

pub mod bits;
pub mod circuit;
pub mod dbm;
pub mod dist;
pub mod error;
pub mod gates;
pub mod learner;
pub mod metrics;
pub mod porter_thomas;
pub mod rng;
pub mod samples;
pub mod simulator;

pub use bits::BasisIndex;
pub use dist::ExplicitDistribution;
pub use error::{Error, Result};
pub use rng::Prng;
pub use samples::SampleSet;

/// Complex amplitude type used across the crate.
pub type Complex = num_complex::Complex<f64>;

/// Hard ceiling on qubit count for explicit 2^n arrays (1 GiB of amplitudes).
pub const MAX_EXPLICIT_QUBITS: usize = 26;

/// Ceiling on qubit count for any [`BasisIndex`].
pub const MAX_QUBITS: usize = 30;
