//! Numerical simulation of qubit teleportation through a hybrid
//! coherent/dual-rail channel, where a highly transmissive beam splitter
//! displaces the teleported qubit by `±α` depending on the coherent branch.
//!
//! The crate is organised bottom-up:
//!
//! * [`fock`]: dense truncated Fock-space states, one- and two-mode
//!   operators, projective measurements and fidelities.
//! * [`displaced`]: closed-form displaced number states and cat states.
//! * [`protocol`]: channel construction, beam-splitter mixing, Alice's
//!   measurements, Bob's corrections and success probabilities.
//! * [`modulation`]: input amplitude modulation and its probability families.
//! * [`generation`]: heralded preparation of the hybrid channel.
//! * [`sweep`]: data-parallel evaluation (rayon behind the `parallel` feature).
//! * [`verify`]: invariant suites shared by tests and the CLI.

pub mod displaced;
pub mod error;
pub mod fock;
pub mod generation;
pub mod modulation;
pub mod protocol;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};

/// Unitarity tolerance on the certified subspace of an operator.
pub const TOL_UNITARY: f64 = 1e-8;
/// Tolerance for normalization checks.
pub const TOL_NORM: f64 = 1e-10;
/// Default tolerance for value comparisons.
pub const TOL_EXAMPLE: f64 = 1e-9;
