//! Semi-classical orthogonal polynomials on the unit circle.
//!
//! The crate builds a catalog of semi-classical weights with their Pearson
//! pairs, computes monic orthogonal polynomials and Verblunsky coefficients
//! from moments and in closed form, and checks structure relations and
//! non-linear difference equations by residuals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod classify;
pub mod differences;
pub mod error;
pub mod moments;
pub mod mopuc;
pub mod quadrature;
pub mod relations;
pub mod report;
pub mod weights;

pub use error::{Error, Result};
