use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word parse error at byte {offset} in {input:?}: {msg}")]
    WordParse {
        input: String,
        offset: usize,
        msg: String,
    },
    #[error("invalid rational {0:?}")]
    RationalParse(String),
    #[error("left operand of a half-shuffle contains the empty word")]
    EmptyLeftOperand,
    #[error("empty argument list")]
    EmptyArguments,
    #[error("word {0:?} does not start with the letter 1")]
    NotInitialOne(String),
    #[error("weight must be at least {min}, got {got}")]
    WeightTooSmall { min: usize, got: usize },
    #[error("weight mismatch: expected {expected}, got {actual}")]
    WeightMismatch { expected: usize, actual: usize },
    #[error("combination is not weight-homogeneous")]
    Inhomogeneous,
    #[error("word {0} is not admissible (must start with 1 and end with 0)")]
    Inadmissible(String),
    #[error(
        "quotient dimension mismatch at weight {weight} with backend {level}: \
         expected {expected}, got {actual}"
    )]
    DimensionMismatch {
        weight: usize,
        level: String,
        expected: usize,
        actual: usize,
    },
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("matrix is not square ({rows} rows, {cols} columns)")]
    NonSquare { rows: usize, cols: usize },
    #[error("root finding did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
