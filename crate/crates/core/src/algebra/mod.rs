//! Exact arithmetic substrate: `Q(sqrt5)` scalars, dense matrices and sparse
//! multivariate polynomials.

mod matrix;
mod numeric;
mod poly;
mod q5;
pub mod text;

pub use matrix::{LinearSpan, Q5Matrix};
pub use numeric::NumericPoly;
pub use poly::{homogeneous_monomials, Monomial, SparsePoly};
pub use q5::{int, parse_rational, ratio, rational_from_f64, sqrt_exact, Q5Scalar, Rational};
pub use text::{parse_default, parse_poly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}
