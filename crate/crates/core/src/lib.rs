//! Correlation witnesses for prepare-and-measure scenarios with
//! four-dimensional quantum messages.
//!
//! The crate builds witnesses tailored to two-ququart states, simulates the
//! three-party protocol (Alice and Bob encode with Pauli-product rotations,
//! Charlie measures product observables with binary outcomes), optimizes the
//! separable and classical bounds by see-saw, and evaluates the standard
//! entanglement-criteria stack (CCNR, trace criterion, negativity/PPT,
//! quantum Fisher information) on a catalog of bound entangled states.

pub mod basis;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod io;
pub mod matops;
pub mod states;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};
pub use matops::ComplexMatrix;
