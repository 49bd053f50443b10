use thiserror::Error;

/// Errors raised by the numeric kernels and summation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision {0} is outside the supported range 30..=200 digits")]
    InvalidPrecision(u32),

    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    Dimension { rows: usize, row: usize, cols: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("q = {0} is singular (too close to 1)")]
    SingularParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("indeterminate convergent at depth {depth}")]
    IndeterminateConvergent { depth: usize },

    #[error("degenerate Hankel minor at index {index}")]
    DegenerateHankel { index: usize },

    #[error("not enough power-series coefficients: need {needed}, have {have}")]
    InsufficientCoefficients { needed: usize, have: usize },

    #[error("Heine relation {relation} inapplicable: {reason}")]
    InapplicableTransform { relation: u8, reason: String },

    #[error("partial sums did not settle into two accumulation points within {max_terms} terms")]
    NonBiConvergentTail { max_terms: usize },

    #[error("term budget of {max_terms} exhausted before the series settled")]
    BudgetExceeded { max_terms: usize },

    #[error("branches disagree: line 1 = {line1}, line 2 = {line2}")]
    BranchMismatch { line1: String, line2: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
