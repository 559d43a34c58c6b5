//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("modulus {p}^{m} does not fit the supported integer range")]
    ModulusTooLarge { p: i64, m: u32 },

    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: i64, modulus: i64 },

    #[error("{a} is not coprime to {modulus}")]
    NotCoprime { a: i64, modulus: i64 },

    #[error("the zero polynomial has no p-adic order")]
    ZeroFunction,

    #[error("every partial derivative is the zero function")]
    AllDerivativesZero,

    #[error("denominator vanishes modulo p at the evaluation point")]
    PoleModP,

    #[error("mismatched variable counts: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("cannot lift conductor {from} into {to}")]
    IncompatibleConductors { from: u64, to: u64 },

    #[error("enumeration of {required} points exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("scaled Hessian is singular modulo p")]
    SingularHessian,

    #[error("critical point with singular scaled Hessian: closed form not available")]
    SingularHessianOutOfScope,

    #[error("Newton iteration failed to reach the requested precision (internal error)")]
    NoConvergence,

    #[error("quadratic form is singular modulo {p}")]
    SingularModP { p: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
