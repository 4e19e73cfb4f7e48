//! Best-response opinion dynamics on directed influence networks and the
//! reflected-appraisal evolution of social power over a sequence of issues.
//!
//! * [`netcore`]: validated matrices and vectors, connectivity, Perron
//!   vectors and linear solves.
//! * [`dynamics`]: single-issue opinion updates, closed-form consensus and
//!   the DeGroot / Friedkin-Johnsen reductions.
//! * [`power`]: self-appraisal maps, fixed-point evolution and equilibrium
//!   checks.
//! * [`netgen`]: seeded random interaction networks.
//! * [`experiment`]: JSON-configured runs with CSV output.
//! * [`batch`]: order-preserving batch evaluation, parallel with the
//!   `parallel` feature.

pub mod batch;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod netcore;
pub mod netgen;
pub mod power;

pub use error::{Error, Result};
pub use netcore::{InteractionMatrix, OpinionVector, SimplexVector};
