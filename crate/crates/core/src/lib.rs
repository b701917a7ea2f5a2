//! Simulation of the two-map quantum switch whose qubit control is exposed
//! to a thermal environment before it is measured.
//!
//! - [`matcore`]: dense complex matrices, Kronecker products, partial traces
//!   and a Jacobi eigensolver for Hermitian matrices.
//! - [`quantum`]: density matrices, Kraus channels, monitoring maps, Gibbs
//!   states.
//! - [`switch`]: the switch map, its block decomposition and control
//!   post-selection.
//! - [`opencontrol`]: collisions of the control with thermal ancillas, both
//!   simulated collision by collision and in closed form.
//! - [`entanglement`]: two-qubit concurrence.
//! - [`experiments`]: the monitored Bell-pair scenario and parameter sweeps.

pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod matcore;
pub mod opencontrol;
pub mod quantum;
pub mod random;
pub mod switch;

pub use error::{Error, Result};
