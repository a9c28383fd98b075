use thiserror::Error;

/// Errors surfaced by the engine.
///
/// Precondition failures (a non-monic divisor, a non-idempotent splitting
/// element, ...) are distinguished from [`Error::Invariant`], which signals
/// that an internal identity failed to re-check and always indicates a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor is not monic")]
    NotMonic,
    #[error("divisor must be non-constant")]
    ConstantDivisor,
    #[error("polynomial must be non-constant")]
    ConstantPolynomial,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator name `{0}` is already in use")]
    DuplicateGenerator(String),
    #[error("operands belong to different algebras")]
    TowerMismatch,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("not a fundamental system of idempotents: {0}")]
    NotFundamental(String),
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("cover was not produced by a splitting operation: {0}")]
    ForeignCover(String),
    #[error("expected {expected} parts, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("invalid cover path {0:?}")]
    InvalidPath(Vec<usize>),
    #[error("ramification index must be positive")]
    BadRamification,
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("truncation order {requested} exceeds available order {available}")]
    OrderTooLarge { requested: usize, available: usize },
    #[error("all non-leading coefficients vanish: increase input order")]
    DegenerateCurve,
    #[error("expression is not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
