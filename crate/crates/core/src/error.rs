use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial of degree {degree} has no reciprocal of order {n}")]
    DegreeMismatch { degree: usize, n: usize },
    #[error("parameter pole: {0}")]
    ParameterPole(String),
    #[error("gamma function pole at {0}")]
    GammaPole(f64),
    #[error("weight is not integrable at θ = {0}")]
    SingularPoint(f64),
    #[error("angle {0} lies outside the weight's domain")]
    OutOfDomain(f64),
    #[error("A vanishes at grid angle θ = {0}")]
    GridOnSingularity(f64),
    #[error("quadrature did not converge: estimated error {estimate:e} after {level} levels")]
    QuadratureFailure { estimate: f64, level: usize },
    #[error("moment μ_{index} requested from a table with N = {n}")]
    MomentRangeExceeded { index: i64, n: usize },
    #[error("numerical breakdown at n = {n}: |α| = {modulus}")]
    NumericalBreakdown { n: usize, modulus: f64 },
    #[error("no closed form for family {0}")]
    NoClosedForm(String),
    #[error("n = {n} is outside the range n >= {min} of the relation")]
    OutOfTheoremRange { n: usize, min: usize },
    #[error("unknown relation '{0}'")]
    UnknownRelation(String),
    #[error("n = {n} outside the validity range of {id}")]
    OutOfRange { id: String, n: i64 },
    #[error("leading coefficient vanishes at step n = {0}")]
    UnsolvableStep(usize),
    #[error("not evaluable at n = {n}: 1 - |α|² = {gap:e}")]
    NotEvaluable { n: usize, gap: f64 },
    #[error("linear system is inconsistent (residual {0:e})")]
    Infeasible(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
