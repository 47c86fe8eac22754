use thiserror::Error;

use crate::poly::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("edge {0} is not an interior edge")]
    NotInterior(u32),
    #[error("edge {0} is not a boundary interval")]
    NotBoundary(u32),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("flipping edge {0} would create a self-folded triangle")]
    WouldSelfFold(u32),
    #[error("cannot glue an interval to itself")]
    SameEdge,
    #[error("negative power of a non-monomial")]
    NonMonomialInverse,
    #[error("no unique lowest term")]
    NoUniqueLowestTerm,
    #[error("variable {0} is not mapped")]
    UnmappedVariable(Var),
    #[error("substitution produced a non-integral exponent")]
    NonIntegralExponent,
    #[error("half exponent at a non-square value")]
    NonPerfectSquare,
    #[error("division by zero")]
    DivisionByZero,
    #[error("schema violation at {0}")]
    Schema(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("curve is not in minimal position")]
    NotMinimalPosition,
    #[error("arc endpoint at a puncture")]
    EndpointAtPuncture,
    #[error("curve is not boundary-ended")]
    NotBoundaryEnded,
    #[error("curve is not a loop")]
    NotLoop,
    #[error("input vector has non-integer entries")]
    NonIntegerInput,
    #[error("lamination is not integral")]
    NotIntegral,
    #[error("punctured surfaces are not supported by this operation")]
    PuncturedSurfaceUnsupported,
    #[error("arcs are not compatible")]
    IncompatibleArcs,
    #[error("pinning sum is negative")]
    NegativePinningSum,
    #[error("wrong chart kind: expected {0}")]
    WrongChartKind(&'static str),
    #[error("no flip path found within the search bound")]
    NoFlipPath,
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
