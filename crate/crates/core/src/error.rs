use thiserror::Error;

/// Errors raised by the library. Verdicts such as "violates" are not errors;
/// they are returned as values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("polynomial is not square-free")]
    NotSquareFree,

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("duplicate atom {0}")]
    DuplicateAtom(String),

    #[error("not finitely atomic at this truncation: {0}")]
    NotFinitelyAtomic(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator has non-constant coefficients")]
    NonConstantCoefficients,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
