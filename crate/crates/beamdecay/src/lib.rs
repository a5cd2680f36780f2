//! Simulation and exponential-decay certificates for a non-homogeneous
//! Euler-Bernoulli beam hinged at both ends, with torsional springs and
//! dampers acting on the end rotations and distributed viscous damping
//! proportional to the mass density.
//!
//! The crate has two halves that check each other:
//!
//! - an analytic half ([`stability`]) that computes the Lyapunov sandwich
//!   constants `beta0`, `beta1`, the admissible penalty range, and the
//!   decay certificate `(M, sigma)` with `E(t) <= M exp(-sigma t) E(0)`;
//! - a numerical half ([`discretization`], [`timestepper`], [`energy`])
//!   that simulates the beam with value-and-slope cubic elements and an
//!   average-acceleration integrator, and verifies the energy identity,
//!   the derivative relations, the sandwich bounds, and the certificate
//!   along the computed trajectories.
//!
//! Start with the runnable examples (`cargo run --example certify`) or the
//! `beamdecay` binary (`beamdecay table1`).

pub mod checks;
pub mod cli;
pub mod discretization;
pub mod energy;
mod error;
pub mod linalg;
pub mod model;
pub mod numeric;
pub mod stability;
pub mod timestepper;

pub use error::{Error, LambdaBound, Result};
pub use model::{
    coefficient_bounds, derived_constant_params, validate, BeamSpec, BoundaryControls,
    CoefficientField, InitialConditions, Profile, SectionParams, ValidationReport,
};
pub use stability::{
    beta_bounds_constant, beta_bounds_general, certificate, decay_envelope, lambda_range,
    DecayCertificate, LyapunovBounds,
};
