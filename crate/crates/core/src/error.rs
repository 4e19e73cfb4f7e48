use thiserror::Error;

use crate::netcore::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("need at least {min} agents, got {found}")]
    TooFewAgents { min: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid interaction matrix: {0}")]
    InvalidInteraction(ValidationReport),

    #[error("vector is not on the simplex: entry {index} = {value}, sum = {sum}")]
    NotOnSimplex { index: usize, value: f64, sum: f64 },

    #[error("opinion {index} = {value} lies outside [0, 1]")]
    OpinionOutOfRange { index: usize, value: f64 },

    #[error("matrix has a negative entry {value} at ({row}, {col}) after shifting")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("matrix is reducible; the dominant left eigenvector is not unique")]
    Reducible,

    #[error("power iteration hit the limit of {iterations} iterations (last step residual {residual:e})")]
    IterationLimit { iterations: usize, residual: f64 },

    #[error("matrix is singular to tolerance at pivot column {column} (|pivot| = {pivot:e})")]
    Singular { column: usize, pivot: f64 },

    #[error("agent {agent}: coefficients sum to {sum}, expected 1")]
    ConstraintViolation { agent: usize, sum: f64 },

    /// `field` names the offending coefficient: `a`, `b` or `a + b`.
    #[error("agent {agent}: {what} at x = {x}")]
    InvalidSchedule { agent: usize, x: f64, field: &'static str, what: String },

    #[error("agent {agent}: susceptibility {value} outside [0, 1]")]
    InvalidSusceptibility { agent: usize, value: f64 },

    #[error("not a permutation of 0..{n}: {detail}")]
    InvalidPermutation { n: usize, detail: String },

    #[error("operation requires the {expected} regime, schedule is {found}")]
    RegimeMismatch { expected: &'static str, found: &'static str },

    #[error("agents {agents:?} are all fully self-weighted; the consensus weights are not unique")]
    Degenerate { agents: Vec<usize> },

    #[error("agent {agent} is isolated (self-weight 1)")]
    IsolatedAgent { agent: usize },

    #[error("invalid cost parameters: {0}")]
    CostParams(String),

    #[error("consensus operator row {row} sums to {sum}")]
    NotStochastic { row: usize, sum: f64 },

    #[error("invalid network parameters: {0}")]
    NetworkParams(String),
}
