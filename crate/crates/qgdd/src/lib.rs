//! q-analogs of group divisible designs over GF(q)^v.
//!
//! A (v, g, k, lambda)_q group divisible design is a pair (groups, blocks)
//! where the groups form a (g-1)-spread (g-dimensional subspaces partitioning
//! the nonzero points), the blocks are k-dimensional subspaces, and every
//! 2-dimensional subspace (line) lies either in exactly one group or in
//! exactly lambda blocks, never both. This crate provides the underlying
//! finite-field and subspace machinery, parameter admissibility checks,
//! direct constructions from fat/scattered subspaces, verification, and a
//! Kramer-Mesner orbit search.

pub mod construct;
pub mod conway;
pub mod design;
pub mod error;
pub mod field;
pub mod gdd;
pub mod grassmann;
pub mod km_search;
pub mod linalg;
pub mod params;
pub mod rng;
pub mod spread;

pub use error::{Error, Result};
pub use field::Field;
pub use linalg::{GfMatrix, Subspace};
pub use spread::Spread;
