use thiserror::Error;

use crate::gf::FieldElement;
use crate::plane::ProjPoint;
use crate::segre::IdentityReport;

/// Everything that can go wrong in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {q} exceeds the configured cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("even order unsupported (q = {0})")]
    EvenOrder(u32),
    #[error("code {code} is not an element of GF({q})")]
    InvalidElement { code: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("interpolation table has no value at {0}")]
    IncompleteTable(FieldElement),
    #[error("homogeneous coordinates must not all be zero")]
    ZeroVector,
    #[error("a line needs two distinct points")]
    IdenticalPoints,
    #[error("frame has three collinear points")]
    DegenerateFrame,
    #[error("point {0} occurs more than once")]
    DuplicatePoint(ProjPoint),
    #[error("point {0} is not on the oval")]
    NotMember(ProjPoint),
    #[error("point {0} does not have exactly one tangent")]
    NotUniqueTangent(ProjPoint),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("not an oval: {0}")]
    NotAnOval(String),
    #[error("oval is not normalized: {0}")]
    NotNormalized(String),
    #[error("zero denominator: the graph violates the arc condition")]
    ZeroDenominator,
    #[error("identity check failed on a valid oval")]
    TheoremViolation(Box<IdentityReport>),
}

pub type Result<T> = std::result::Result<T, Error>;
