//! Minimum-entropy-production driving of a two-level system between equilibrium states.
//!
//! - [`dynamics`]: Hamiltonian, thermal states, GKLS and classical master-equation
//!   evolution, distances and entropy-production rates.
//! - [`oracle`]: exact variational solution of the classical problem and its
//!   reachability frontier.
//! - [`policy`]: a from-scratch Gaussian-policy REINFORCE learner with an MLP mean.
//! - [`harness`]: run configuration, training and sweep orchestration, file formats.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod policy;

pub use error::{Error, Result};
