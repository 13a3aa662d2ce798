//! Error type shared by the arithmetic kernel.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("series is zero: every retained coefficient vanished")]
    ZeroSeries,
    #[error("division by the zero series")]
    DivisionByZeroSeries,
    #[error("precision exhausted: cancellation consumed every retained term")]
    PrecisionExhausted,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not subtraction-free: {0}")]
    NotSubtractionFree(String),
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("inexact division")]
    InexactDivision,
}
