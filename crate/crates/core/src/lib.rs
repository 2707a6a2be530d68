//! Exact lattice, Mukai-vector, slope and motive computations for
//! supersingular K3 surfaces, abelian surfaces and the hyper-Kähler
//! varieties built from them.
//!
//! Everything is exact: integer Gram matrices with big-integer
//! determinants, rational slopes, and integer multiplicities.

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod crystal;
pub mod error;
pub mod json;
pub mod lattice;
pub mod motive;
pub mod mukai;
pub mod partition;
pub mod pipeline;
pub mod search;

pub use error::{Error, ErrorKind, Result};
pub use lattice::{IntLattice, LatVec};
