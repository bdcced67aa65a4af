//! The Unruh effect modelled as a noisy quantum channel.
//!
//! An inertial observer (Alice) and a uniformly accelerated observer (Rob)
//! share a Bell-like state of two bosonic modes. Rob's mode, seen from the
//! accelerated frame, is a two-mode squeezed state over the Rindler wedges I
//! and II; tracing out wedge II turns the acceleration into a channel acting
//! on the Alice-Rob system. This crate builds that channel's Kraus operators
//! in a truncated Fock space, checks where it is trace preserving, and
//! evaluates entanglement fidelity, entropy exchange, mutual information and
//! the sub-additivity margin as functions of the acceleration parameter `r`.
//!
//! Every closed-form result is paired with a brute-force route (partial
//! traces of the full tripartite state, dense eigensolves) so the two can be
//! checked against each other.

pub mod channel;
pub mod error;
pub mod fock;
pub mod measures;
pub mod rindler;
pub mod sweep;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, FactorLayout, StateVector, TruncationConfig};

/// Factor label of Alice's qubit.
pub const ALICE: &str = "A";
/// Factor label of the Rindler mode in wedge I (Rob's side).
pub const WEDGE_I: &str = "I";
/// Factor label of the Rindler mode in wedge II (the traced-out environment).
pub const WEDGE_II: &str = "II";
