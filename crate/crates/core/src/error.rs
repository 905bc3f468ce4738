use thiserror::Error;

/// Errors from the expression and rational parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound identifier `{name}` at line {line}, column {column}")]
    UnboundIdentifier {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("`d` is not allowed in a differential polynomial")]
    OperatorInPolynomial,
}

/// Errors raised by the algebraic kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("truncation orders differ: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("valuation precondition failed: {0}")]
    Valuation(String),
    #[error("supplied degree-0 inverse does not invert the constant term")]
    NotAUnit,
    #[error("matrix is singular")]
    Singular,
    #[error("requested order {requested} lies below the precision floor {floor}")]
    PrecisionExhausted { requested: i64, floor: i64 },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
