//! Meta-learned parameter initialization for variational quantum eigensolvers.
//!
//! A classical network (the *learner*) maps a task vector describing a
//! Hamiltonian to the angles of a parameterized circuit. It is trained across
//! many Hamiltonians on the summed circuit energy, then each new task starts
//! its own circuit optimization from the learner's prediction.
//!
//! * [`hamiltonian`] – Pauli-string operators, Jordan-Wigner, exact solvers
//! * [`simulator`] – statevector circuits, expectations and gradients
//! * [`learner`] – the MLP with backpropagation and Adam
//! * [`taskspace`] – task vectors, sampling and distance probes
//! * [`meta`] – pre-training, adaptation, baselines and diagnostics
//! * [`embed`] – distribution embedding with a KL objective
//! * [`cli`] – experiment runner behind the `qmaml` binary

pub mod cli;
pub mod embed;
pub mod error;
pub mod hamiltonian;
pub mod learner;
pub mod meta;
pub mod rng;
pub mod simulator;
pub mod taskspace;

pub use error::{Error, Result};
