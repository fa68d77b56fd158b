//! Exact invariants of rational surface singularities given by their
//! resolution dual graphs: fundamental cycles, discrepancies, the local
//! invariant `delta_x`, Zariski decompositions and a freeness criterion for
//! adjoint linear systems.

pub mod atlas;
pub mod cli;
pub mod criterion;
pub mod cycles;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod tables;
pub mod zariski;

pub use error::{Error, Result};
