use thiserror::Error;

/// Errors raised by the exact arithmetic tower.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("cannot add values with pi-grades {0} and {1}")]
    GradeMismatch(i32, i32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole")]
    PoleEvaluation,
    #[error("repeated pole in denominator")]
    RepeatedPole,
    #[error("denominator has a non-integer pole")]
    NonIntegerPole,
    #[error("numerator degree {num} is not below denominator degree {den}")]
    ImproperFraction { num: usize, den: usize },
    #[error("odd exponent {0} in an even Laurent polynomial")]
    OddExponent(i64),
    #[error("matrix dimension {0} too large for the permutation double sum")]
    DimensionTooLarge(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("cannot parse exact scalar: {0}")]
    Parse(String),
}

/// Errors raised by the numeric coefficient-space code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("evaluation at x = 0")]
    ZeroArgument,
    #[error("zero root in root vector at index {0}")]
    ZeroRoot(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("leading coefficient is zero")]
    DegenerateLeadingCoefficient,
    #[error("root finder did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("quadrature node hit a zero of the polynomial")]
    NodeOnZero,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: i64, limit: i64 },
    #[error("finite-difference step {h:e} too large for the point")]
    StepTooLarge { h: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("kernel vector not found for N = {0}")]
    KernelNotFound(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
