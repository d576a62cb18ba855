//! Exact computations on small matroids: bases, ranks, minors and duals,
//! Tutte polynomials, weak maps, relative freedom of elements, exhaustive
//! catalogs and sweeping verification of the weak-order sign laws.
//!
//! Matroids have at most 16 elements, numbered `0..n`, and are stored as
//! their bases.

pub mod canonical;
pub mod catalog;
pub mod constructions;
pub mod format;
pub mod matroid;
pub mod order;
pub mod set;
pub mod tutte;
pub mod verify;

pub use canonical::{CanonicalForm, CanonicalKey};
pub use format::{parse_matroid, write_matroid, ParseError};
pub use matroid::{Matroid, MatroidError};
pub use set::ElementSet;
pub use tutte::{TutteCache, TuttePoly};
