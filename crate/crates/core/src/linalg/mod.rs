//! Exact integer and rational linear algebra.

mod feasibility;
mod matrix;
mod normal_form;

pub use feasibility::{
    parse_rational, rat, ratio, Direction, Equality, Inequality, LinearSystem, Rational,
};
pub use matrix::IntMatrix;
pub use normal_form::{hermite_normal_form, integer_solve, smith_normal_form, IntegerSolver, Smith};

pub use matrix::big_vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
}
