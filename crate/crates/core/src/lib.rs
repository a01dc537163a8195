//! Purity (Bloch-radius) dynamics of a controlled two-level system under
//! Lindblad dissipation.
//!
//! With unbounded Hamiltonian controls the state can be rotated freely along
//! a sphere of constant Bloch radius `r`, so the only dynamics that matter
//! for purification are those of `r`:
//!
//! ```text
//! dr/dt = Σ_j b_j n_j − r Σ_j a_j (1 − n_j²)
//! ```
//!
//! where the unit vector `n̂` plays the role of the control. This crate
//! converts between Lindblad operators, the GKS matrix and the six
//! parameters `(a, b)` ([`model`]), evaluates and integrates the Bloch,
//! radial and unit-vector equations and synthesizes Hamiltonian controls for
//! a planned path ([`dynamics`]), computes the extremal rate envelopes
//! `f_M(r)`, `f_m(r)` ([`extremal`]), and derives trap radii, reachability
//! and purifiability ([`analysis`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod model;
mod roots;

pub use error::{Error, Result};
pub use linalg::Vec3;
pub use model::{
    bloch_from_density, density_from_bloch, gks_from_lindblad, pauli_expand,
    project_to_six_params, validate_inequality, BlochState, DensityMatrix, GksModel, LindbladOp,
    ProjectedSystem,
};
pub use dynamics::{bloch_rhs, radial_rate, unit_rhs, ControlVector, Trajectory};
pub use extremal::{envelope_at, envelope_curve, EnvelopePoint, RateEnvelope};
pub use analysis::{classify_purifiable, reachable, trap_radius, PurifiabilityVerdict, TrapReport};
