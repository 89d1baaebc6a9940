//! Exact-arithmetic toolkit for comparing the two classical notions of
//! regularity: the Fuchs / lattice criterion for connections and the
//! radical graded-annihilator criterion for holonomic D-modules.
//!
//! Everything is computed over `Q` with no floating point anywhere.

pub mod algebra;
pub mod corpus;
pub mod dmod;
mod error;
pub mod parse;
pub mod polelattice;
pub mod regularity;
pub mod systems;
pub mod weyl;

pub use error::{Error, Result};
