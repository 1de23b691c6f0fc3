//! Exact scalars (ℚ and ℚ(ε_n)) and dense linear algebra over them.

pub mod cyclotomic;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod scalar;

use thiserror::Error;

pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use matrix::{Matrix, MatrixError};
pub use poly::cyclotomic_polynomial;
pub use rational::{int, parse_rational, ratio, render_rational, serialize_rational, Rational};
pub use scalar::{FieldKind, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ScalarParseError {
    pub position: usize,
    pub message: String,
}
