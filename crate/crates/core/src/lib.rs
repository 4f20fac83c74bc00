//! Numerical laboratory for minimal-distance problems between closed convex
//! sets: projections, distance solvers, set-convergence metrics and
//! recession-cone diagnostics.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod lab;
pub mod metrics;
pub mod projection;
pub mod sets;
pub mod solver;
pub mod vector;

pub use error::{Error, Result};
pub use vector::DenseVector;
