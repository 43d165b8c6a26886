//! Analysis and construction of cubic bent Boolean functions.
//!
//! The crate covers truth tables and algebraic normal forms, GF(2) subspaces
//! on which second-order derivatives vanish, incidence-matrix invariants
//! (2-rank, Γ-rank, Smith normal form) and the direct-sum and Maiorana-McFarland
//! style constructions built on top of them.

pub mod boolcore;
pub mod catalog;
pub mod constructions;
pub mod error;
pub mod gf2linalg;
pub mod invariants;
pub mod subspaces;

pub use boolcore::{Anf, BooleanFunction, WalshSpectrum};
pub use error::{Error, Result};
pub use gf2linalg::{Gf2Matrix, Subspace};
