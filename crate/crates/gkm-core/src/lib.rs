//! Exact-arithmetic Morse theory on edge-labeled graphs.
//!
//! A *skeleton* is a `d`-valent graph whose oriented edges carry rational
//! covectors (the axial function). This crate validates the defining axioms,
//! runs discrete Morse theory on the induced orientations, computes graded
//! cohomology by exact nullspace elimination, searches for generating (Thom)
//! classes, and implements the level-set machinery: integration, Kirwan
//! restriction to cross-sections, hypergraph cohomology membership, cutting
//! and wall-crossing. All arithmetic is over arbitrary-precision rationals;
//! there is no floating point anywhere in the core.

pub mod catalog;
pub mod cohomology;
pub mod crosssection;
pub mod cutting;
pub mod error;
pub mod integration;
pub mod morse;
pub mod polyring;
pub mod skeleton;
pub mod symfun;
pub mod wallcross;

pub use error::GkmError;
pub use polyring::{graded_dim, MultiPoly, RationalFn, SpaceCtx, Vector};
pub use skeleton::Skeleton;
