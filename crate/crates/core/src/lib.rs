//! Exact calculus for modular tensor categories with surface and line defects.
//!
//! The crate is organised bottom-up:
//!
//! - [`cyclotomic`]: exact arithmetic in Q(ζ_N)
//! - [`linalg`]: dense matrices over the cyclotomic scalars
//! - [`category`]: skeletal MTC data, the sl(2)_k generator and axiom verifiers
//! - [`homspace`]: morphisms between tensor words in fusion-tree bases
//! - [`diagram`]: sliced ribbon diagrams and their evaluation
//! - [`frobenius`]: Frobenius algebras and the haploid solver
//! - [`multimodule`]: multi-modules, twists, cyclic structures, module homs
//! - [`defect`]: triangulated defect surfaces, dual networks and sphere state spaces
//! - [`invariants`]: centers, the full-center matrix and torus invariants
//!
//! Only multiplicity-free fusion rules (N_{ij}^k ∈ {0, 1}) are supported.

pub mod category;
pub mod cyclotomic;
pub mod defect;
pub mod diagram;
pub mod error;
pub mod frobenius;
pub mod homspace;
pub mod invariants;
pub mod linalg;
pub mod multimodule;

pub use cyclotomic::CycScalar;
pub use error::{Error, Result};
