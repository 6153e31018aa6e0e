use thiserror::Error;

/// Failures raised anywhere in the field, Galois and cohomology pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    ParentMismatch,
    #[error("degree {d} does not divide extension degree {n}")]
    DegreeError { d: usize, n: usize },
    #[error("norm condition violated: right-hand side does not have norm 1")]
    NormConditionViolated,
    #[error("trace condition violated: right-hand side does not have trace 0")]
    TraceConditionViolated,
    #[error("element is not a generator of the unit group")]
    NotAGenerator,
    #[error("zero argument")]
    ZeroArgument,
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("precision too small: {0}")]
    PrecisionTooSmall(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is indistinguishable from zero at the working precision")]
    IndistinguishableFromZero,
    #[error("Hensel lifting failed: {0}")]
    HenselFails(String),
    #[error("extension is not Galois: found {found} automorphisms, degree is {degree}")]
    NotGalois { found: usize, degree: usize },
    #[error("norm equation could not be solved: {0}")]
    NormSolveFailed(String),
    #[error("cocycle components disagree for pair ({0}, {1})")]
    DiagonalityViolated(usize, usize),
    #[error("cocycle value for pair ({0}, {1}) does not lie in the base field")]
    NotInL(usize, usize),
    #[error("oracle size guard exceeded: {0}")]
    OracleTooLarge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
