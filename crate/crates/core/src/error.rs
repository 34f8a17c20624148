use thiserror::Error;

use crate::orbit::WeightVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 65536")]
    NotPrime(u32),
    #[error("operation undefined at zero")]
    ZeroInput,
    #[error("fractional part has a denominator that is not a power of x")]
    NotFiniteTail,
    #[error("empty vector")]
    EmptyVector,
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("lattice is not unimodular (det exponent {0})")]
    NotUnimodular(i64),
    #[error("precision {given} too low, need at least {required}")]
    PrecisionTooLow { given: i64, required: i64 },
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("weight vector does not sum to zero")]
    BadWeight,
    #[error("no well-rounded shift with max-norm <= {cap}")]
    NotFoundAtCap { cap: u32, best: WeightVector },
    #[error("threshold {0} out of range")]
    BadThreshold(i64),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("lattice file line {line}: {msg}")]
    LatticeFile { line: usize, msg: String },
}
