//! Error types shared across the crate.

use thiserror::Error;

use crate::poly::VariableId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    /// The quotient is not a polynomial with integer coefficients. This is
    /// an ordinary result value, used as a structural probe by the
    /// elimination, not a fatal condition.
    #[error("quotient is not an integer polynomial")]
    DivisionFailure,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("no value assigned to {0}")]
    MissingVariable(VariableId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("event {index}: {msg}")]
    InvalidEvent { index: usize, msg: String },
    #[error("tope {index}: {msg}")]
    InvalidTope { index: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("topes have mismatched lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("arrangement is semigeneral: no degenerate point to split at")]
    NoDegeneracy,
    #[error("split postcondition violated: {0}")]
    SplitInvariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    /// The backtracking search exhausted all orders. Not expected on any
    /// valid arrangement; surfaced as a bug detector.
    #[error("no good numbering found")]
    NumberingNotFound,
    #[error("numbering validation failed: {0}")]
    InvalidNumbering(String),
    #[error("exact division failed at pivot {pivot} target {target}")]
    ExactDivisionFailure { pivot: usize, target: usize },
    #[error("block multipliers inconsistent at row {row}: {msg}")]
    MultiplierInconsistent { row: usize, msg: String },
    #[error("off-block entry ({0}, {1}) is not symbolically zero")]
    ResidualNonzero(usize, usize),
    #[error("block at point {point} does not match the leftover matrix closed form")]
    BlockMismatch { point: usize },
    #[error("scalar entry at position {position} does not match its predicted product")]
    ScalarMismatch { position: usize },
    #[error("duplicate topes at rows {0} and {1}")]
    DuplicateTopes(usize, usize),
}
