//! Small-strain elasticity finite elements for pure traction (Neumann) problems.
//!
//! The stiffness matrix of a traction problem is singular: its kernel contains the
//! six infinitesimal rigid body modes. This crate removes the singularity by adding
//! a small mass-proportional term `eta * M` to the stiffness, which leaves the
//! sparsity pattern untouched and selects the solution of minimal L2 norm as
//! `eta -> 0`. On top of that sit an iterative scheme that recovers the exact
//! singular solution for equilibrated loads, and a predictor-corrector scheme that
//! produces centered solutions even when the discretization leaves the loads
//! slightly out of equilibrium.

pub mod benchmarks;
pub mod config;
pub mod elasticity;
pub mod error;
pub mod homogenization;
pub mod mesh;
pub mod report;
pub mod rigidbody;
pub mod solvers;
pub mod sparse;

pub use error::{FemError, Result};
