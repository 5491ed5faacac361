//! One error type for the whole crate; variants map onto the distinct
//! failure classes the CLI turns into exit codes.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("modulus {0} is not a prime in [2, 2^31)")]
    InvalidModulus(u64),

    #[error("operands belong to different fields: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("no group inverse: index is {0} (group inverse requires index <= 1)")]
    NoGroupInverse(usize),

    #[error("pair conditions not met (a2b=aba: {cond_ab}, b2a=bab: {cond_ba})")]
    ConditionsNotMet { cond_ab: bool, cond_ba: bool },

    #[error("pair does not commute")]
    NotCommuting,

    #[error("search space too large: {0}")]
    SpaceTooLarge(String),

    #[error("invalid search spec: {0}")]
    BadSearchSpec(String),

    #[error("expected exactly one Drazin candidate, found {0}")]
    NonUnique(usize),

    #[error("exhausted {0} draws without collecting the requested pairs")]
    ExhaustedAttempts(u64),

    #[error("parse error: {0}")]
    Parse(String),
}
