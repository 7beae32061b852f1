//! Engine for the n-dimensional Rubik's cube with edge length k: state and
//! moves, classification of cubies, orientation, the complete invariant
//! system, exact state counts, a constructive solver and brute-force
//! oracles.

pub mod census;
pub mod classify;
pub mod error;
pub mod exec;
pub mod group;
pub mod invariants;
pub mod oracle;
pub mod orientation;
pub mod puzzle;
pub mod solver;

pub use error::{Error, Result};
pub use exec::Exec;
