use std::fmt;

use crate::matrix::TriadIndex;

/// Upper-triangle position `(i, j)`, 1-based, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry(pub usize, pub usize);

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix order {0} is too small, at least 3 is required")]
    OrderTooSmall(usize),
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry {0} is not strictly positive")]
    NonPositiveEntry(Entry),
    #[error("entry {0} is not a finite number")]
    NonFiniteEntry(Entry),
    #[error("diagonal entry ({0},{0}) differs from its neutral value")]
    BadDiagonal(usize),
    #[error("entries {entry} and its mirror are not reciprocal (residual {residual:.3e})")]
    ReciprocityViolation { entry: Entry, residual: f64 },
    #[error("entries {entry} and its mirror are not antisymmetric (residual {residual:.3e})")]
    AntisymmetryViolation { entry: Entry, residual: f64 },
    #[error("weight {0} is not strictly positive")]
    NonPositiveWeight(usize),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("cannot average an empty list")]
    EmptyInput,
    #[error("value at position {index} is negative")]
    NegativeValue { index: usize },
    #[error("value at position {index} is numerically zero, undefined for a negative exponent")]
    ZeroWithNegativeExponent { index: usize },
    #[error("indicator undefined for p = {p}: triad {triad} is consistent")]
    IndicatorUndefined { p: String, triad: TriadIndex },
    #[error("no analytic gradient for p = {0} on matrices larger than 3x3")]
    NonSmoothExponent(String),
    #[error("gradient undefined: the matrix is consistent")]
    OnConsistentLocus,
    #[error("gradient undefined: triad {0} is numerically consistent")]
    DegenerateDefect(TriadIndex),
    #[error("entry {0} cannot be kept positive by step halving")]
    PositivityFailure(Entry),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
