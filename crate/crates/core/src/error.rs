use alloc::string::String;
use num_bigint::BigInt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("polynomials use different variable orders")]
    VarOrderMismatch,
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("divisor does not divide the dividend exactly")]
    NotDivisible,
    #[error("degrees must be strictly decreasing (position {index} has degree {degree}, previous {previous})")]
    DegreesNotStrictlyDecreasing { index: usize, degree: usize, previous: usize },
    #[error("all polynomials of the tuple vanish at z = {0}")]
    CommonPositiveRoot(BigInt),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("representation table would exceed {limit} keys")]
    CapacityExceeded { limit: usize },
    #[error("enumeration of {size} tuples exceeds the oracle ceiling {ceiling}")]
    CeilingExceeded { size: u128, ceiling: u128 },
    #[error("no dependency of degree <= {cap}")]
    NotFoundWithinCap { cap: u32 },
    #[error("dependency search at level {0} needs explicit opt-in")]
    LevelCapExceeded(usize),
    #[error("point is not a solution of the system")]
    NotASolution,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("coefficient vector h is zero")]
    ZeroHVector,
    #[error("shifts a_{0} and a_{1} coincide")]
    RepeatedShift(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
