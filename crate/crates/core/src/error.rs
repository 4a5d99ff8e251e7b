use alloc::string::String;

use crate::scalar::VarId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(VarId),
    #[error("variable {0} is assigned zero but occurs with a negative exponent")]
    ZeroBaseWithNegativeExponent(VarId),
    #[error("variable {var} occurs with degree {found}, above the requested {degree}")]
    DegreeExceeded { var: VarId, found: i32, degree: i32 },
    #[error("value is not invertible: {0}")]
    NotInvertible(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("b(λ_{0} - λ_{1}) vanishes: spectral points coincide")]
    CoincidingSpectralPoints(usize, usize),
    #[error("pole in expansion coefficient: spectral points {0} and {1} coincide")]
    PoleAtCoincidingPoints(usize, usize),
    #[error("partition-function provider failed: {0}")]
    ProviderFailure(String),
    #[error("size {size} exceeds the limit {limit} for {what}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("expected a one-dimensional nullspace, found dimension {0}")]
    NullspaceDimensionUnexpected(usize),
    #[error("exponent of {var} is {exp}, which is not divisible by {by}")]
    OddExponent { var: VarId, exp: i32, by: i32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
