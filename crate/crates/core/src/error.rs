//! Domain errors.

use thiserror::Error;
use tropflag_arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weight lift {0} is not weakly decreasing")]
    NotDominant(String),
    #[error("weight {0} is not integral")]
    NonIntegralWeight(String),
    #[error("rank too large: n = {n} exceeds the bound {max}")]
    RankTooLarge { n: usize, max: usize },
    #[error("filling is not ideal: {0}")]
    NotIdeal(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element is not in the big cell (a required minor vanishes)")]
    NotInBigCell,
    #[error("precision exhausted: cancellation consumed every retained term")]
    PrecisionExhausted,
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("not subtraction-free: {0}")]
    NotSubtractionFree(String),
    #[error("symbolic computation exceeds the bound n <= {max} (n = {n})")]
    SymbolicBlowup { n: usize, max: usize },
    #[error("factorization ambiguity: {0}")]
    FactorizationAmbiguity(String),
    #[error("lowest-weight monomial is ambiguous: {0}")]
    LowestWeightAmbiguous(String),
    #[error("no lowest-weight monomial: {0}")]
    NoSolution(String),
    #[error("critical point is not integral for weight {0}")]
    NotIntegral(String),
    #[error("valuation of the zero section")]
    ZeroSection,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("arithmetic: {0}")]
    Arith(ArithError),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotDominant(_) => "NotDominant",
            Error::NonIntegralWeight(_) => "NonIntegralWeight",
            Error::RankTooLarge { .. } => "RankTooLarge",
            Error::NotIdeal(_) => "NotIdeal",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotInBigCell => "NotInBigCell",
            Error::PrecisionExhausted => "PrecisionExhausted",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NotSubtractionFree(_) => "NotSubtractionFree",
            Error::SymbolicBlowup { .. } => "SymbolicBlowup",
            Error::FactorizationAmbiguity(_) => "FactorizationAmbiguity",
            Error::LowestWeightAmbiguous(_) => "LowestWeightAmbiguous",
            Error::NoSolution(_) => "NoSolution",
            Error::NotIntegral(_) => "NotIntegral",
            Error::ZeroSection => "ZeroSection",
            Error::Invalid(_) => "Invalid",
            Error::Internal(_) => "Internal",
            Error::Arith(_) => "Arith",
        }
    }
}

impl From<ArithError> for Error {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::PrecisionExhausted => Error::PrecisionExhausted,
            ArithError::DivisionByZero | ArithError::DivisionByZeroSeries => Error::NotInBigCell,
            ArithError::NotSubtractionFree(s) => Error::NotSubtractionFree(s),
            other => Error::Arith(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
