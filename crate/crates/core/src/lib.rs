//! Finite-dimensional functional analysis, executed.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`exponent`], [`vector`], [`convex`]: scalars over either
//!   field, exponents in `[1, ∞]`, `p`-norms and the convexity toolkit.
//! * [`duality`]: linear functionals, dual norms and their extremizers,
//!   polyhedral gauges, the extension theorem and polyhedral cones.
//! * [`operators`]: dense matrices, operator norms, a Jacobi eigensolver,
//!   Schmidt decompositions and Schatten norms.
//! * [`interpolation`]: the log-convexity of `p ↦ ‖T‖_{p→p}` as a harness.
//! * [`dyadic`]: dyadic step functions on `[0, 1)`, maximal and square
//!   functions, stopping-time decompositions, Haar/Rademacher/Walsh systems.
//! * [`seqspace`]: finitely supported functions on opaque index sets.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convex;
pub mod duality;
pub mod dyadic;
pub mod error;
pub mod exponent;
pub mod interpolation;
pub mod linalg;
pub mod lp;
pub mod operators;
pub mod random;
pub mod scalar;
pub mod seqspace;
pub mod vector;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use operators::Matrix;
pub use scalar::{Field, Scalar};
pub use vector::Vector;
