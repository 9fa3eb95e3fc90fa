//! Exact scalar arithmetic over Q and Q(i), and dense linear algebra on top of it.

mod matrix;
mod scalar;

pub use matrix::{axpy, independent, is_zero_vec, scale_vec, ExactMatrix, Matrix, RationalMatrix};
pub use scalar::{parse_rational, Field, GaussianRational, Rational, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("rows of unequal length")]
    Ragged,
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
}
