//! Smallest eigenvalue gaps of random matrices.
//!
//! Samplers for the Ginibre, Wishart, GUE, unitary-invariant and i.i.d. disk
//! ensembles, eigenvalue solvers, gap extraction, determinantal kernels,
//! Poisson limit laws and the statistical tests that compare the two.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod eigensolver;
pub mod error;
pub mod experiment;
pub mod gaps;
pub mod kernel;
pub mod laws;
pub mod quadrature;
pub mod region;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod stats;

pub use error::{GapError, Result};
