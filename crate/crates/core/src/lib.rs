//! Verification games between a classical learner and a quantum-device
//! holder, with the exact small-width simulators needed to referee them.
//!
//! Alice proposes Gibbs reweightings of the uniform distribution, Bob answers
//! with witness functions that separate her guess from his target, and a
//! sampling referee accepts or rejects each claim. Everything is exact at
//! `n <= 20` (dense tables) or smaller (density matrices, `n <= 10`).

// Negated float comparisons such as `!(x > 0.0)` deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distcore;
pub mod error;
pub mod rng;
pub mod witness;
pub mod qsim;
pub mod stab;
pub mod mirror;
pub mod sampler;
pub mod arena;
pub mod xhog;
pub mod noisebudget;

pub use distcore::{
    hoeffding_samples, optimal_distinguisher, relative_entropy, renyi2_entropy, shannon_entropy, tv_distance,
    BitString, DensePmf,
};
pub use error::{Error, Result};
pub use mirror::{initial_guess, iteration_cap, GibbsGuess};
pub use qsim::{Circuit, CliffordGate, Gate, NoiseSpec};
pub use witness::{MaxCutGraph, Witness};
