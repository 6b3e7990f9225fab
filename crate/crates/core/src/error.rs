use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty comparator")]
    EmptyComparator,
    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("nonpositive step: {0}")]
    NonpositiveStep(f64),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("bad oracle: {0}")]
    BadOracle(String),
    #[error("grid oracle out of range: {0}")]
    GridOutOfRange(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("infeasible comparator: {0}")]
    Infeasible(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
