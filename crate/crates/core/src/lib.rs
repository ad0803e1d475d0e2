//! Exact spectral sequences of filtered dg-algebras and transfer of filtered
//! A∞-structures onto their pages.

pub mod ainfinity;
pub mod complexes;
pub mod error;
pub mod hodge;
pub mod linalg;
pub mod presentations;
pub mod scalar;
pub mod sparse;
#[cfg(test)]
mod testing;

pub use error::{Error, LinalgError, Result, ScalarError};
pub use linalg::{Matrix, Subspace, Vector};
pub use scalar::{parse_scalar, FieldTag, GaussianRational, Rational, Scalar};
