//! Verification workbench for shape operators of solvable-group orbits in
//! non-compact Riemannian symmetric spaces.
//!
//! The library is split along the pipeline:
//! - [`rootsys`]: abstract restricted root systems (Cartan integers, strings,
//!   two-root string classes).
//! - [`liealg`]: concrete semisimple Lie algebras over exact rational
//!   structure constants, with Killing form, Cartan involution, restricted
//!   root space decompositions and the left-invariant metric on a+n.
//! - [`geometry`]: Levi-Civita connection, shape operators of orbits,
//!   principal curvature spectra and the constant-principal-curvature sweep.
//! - [`construct`]: builders for the classified orbit families, algebraic
//!   CPC characterization, obstruction blocks, and the normalizer
//!   certificate.
//! - [`battery`]: the acceptance battery shared by the test suite and the
//!   command-line runner.
//!
//! All algebraic identities are verified in exact rational arithmetic;
//! floating point enters only at orthonormalization and eigensolving.

pub mod battery;
pub mod construct;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod liealg;
pub mod linalg;
pub mod report;
pub mod rootsys;

pub use error::{Error, Result};
