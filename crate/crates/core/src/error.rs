use thiserror::Error;

use crate::exactnum::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("channel row index {row} sums to {sum}, expected exactly 1")]
    RowSum { row: usize, sum: Rational },

    #[error("channel entry at row index {row}, column index {col} is negative")]
    NegativeEntry { row: usize, col: usize },

    #[error("distribution sums to {0}, expected exactly 1")]
    DistributionSum(Rational),

    #[error("distribution entry at index {0} is negative")]
    NegativeProbability(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("refusing exhaustive search: {0}")]
    TooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("machine definition error at line {line}: {msg}")]
    Machine { line: usize, msg: String },

    #[error("halting status of input {input} unresolved within {budget} steps")]
    Unresolved { input: u64, budget: u64 },
}
