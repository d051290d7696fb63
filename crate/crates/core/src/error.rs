use thiserror::Error;

use crate::words::Letter;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("word must not be empty")]
    EmptyWord,
    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(String),
    #[error("letter {0} is not a positive integer")]
    ZeroLetter(Letter),
    #[error("letter {0} is outside the alphabet")]
    LetterOutsideAlphabet(Letter),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("morphism is not prolongable at letter {0}")]
    NotProlongable(Letter),
    #[error("stream exhausted after {0} letters")]
    StreamExhausted(usize),
    #[error("need at least {needed} convergents, got {got}")]
    TooFewConvergents { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("block {index} breaks the family invariant: {reason}")]
    BlockInvariant { index: usize, reason: String },
    #[error("degenerate growth estimate: M_hat = {upper}, m_hat = {lower}")]
    DegenerateGrowth { upper: f64, lower: f64 },
    #[error("matrix has complex eigenvalues")]
    ComplexEigenvalues,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
