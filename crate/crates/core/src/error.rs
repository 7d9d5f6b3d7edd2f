use thiserror::Error;

use crate::jetspace::JetVar;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    SingularPoint,
    #[error("variable {0} has no value at the evaluation point")]
    UnassignedVariable(JetVar),
    #[error("expression has order {needed} but only order {available} is available")]
    OrderTooHigh { needed: usize, available: usize },
    #[error("invalid vector field: {0}")]
    InvalidField(String),
    #[error("generators have mismatched dimensions: expected (p, q) = ({p}, {q})")]
    DimensionMismatch { p: usize, q: usize },
    #[error("no non-singular sample point found after {0} attempts; the sampling box may be non-generic")]
    SamplingExhausted(usize),
    #[error("order {n} exceeds the default limit {limit} for a {r}-dimensional group; enable large orders to proceed")]
    OrderLimit { n: usize, limit: usize, r: usize },
    #[error("invariant differential operator undefined: total derivative of I vanishes identically")]
    DegenerateOperator,
    #[error("invariant differential operators need a single independent variable")]
    NotOneIndependent,
    #[error("[{a}, {b}] is not in the span of the generators")]
    NotClosed { a: usize, b: usize },
    #[error("{0}")]
    Parse(#[from] crate::cli::parse::ParseError),
}
