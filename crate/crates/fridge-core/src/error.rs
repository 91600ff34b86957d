//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by operator algebra, model construction, and solvers.
#[derive(Debug, Clone, Error)]
pub enum FridgeError {
    /// Tensor product of operators whose qubit labels overlap.
    #[error("tensor factors share qubit label(s) {overlap:?}")]
    LabelCollision { overlap: Vec<u8> },

    /// Binary operation on operators living on different qubit sets.
    #[error("operator qubit sets differ: {left} vs {right}")]
    LabelMismatch { left: String, right: String },

    /// Partial trace asked to keep nothing, or to keep qubits the operator
    /// does not act on.
    #[error("partial trace keep-set {keep} is not a nonempty subset of {labels}")]
    BadKeepSet { keep: String, labels: String },

    /// Qubit label outside {1, 2, 3}.
    #[error("qubit label {label} is not in {{1, 2, 3}}")]
    InvalidQubit { label: u8 },

    /// Matrix dimension does not match the qubit labels.
    #[error("matrix is {rows}x{cols} but the label set requires dimension {expected}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
    },

    /// Candidate density matrix is not Hermitian at tolerance.
    #[error("not Hermitian: max |A - A^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// Candidate density matrix trace is not 1 at tolerance.
    #[error("trace is {trace:.17} (must be 1 within tolerance)")]
    TraceNotOne { trace: f64 },

    /// Candidate density matrix has an eigenvalue below the positivity floor.
    #[error("not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    /// Physical parameter outside its domain.
    #[error("invalid parameter: {reason}")]
    InvalidParams { reason: String },

    /// Scalar argument outside its domain (times, ranges, counts).
    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },

    /// State expected to be diagonal is not.
    #[error("state is not diagonal: max off-diagonal magnitude = {deviation:.3e}")]
    NotDiagonal { deviation: f64 },

    /// Efficiency requested outside the cooling regime.
    #[error("not a refrigerator here: cooling margin = {margin:.6e} (must be > 0)")]
    NotCooling { margin: f64 },

    /// Temperature ordering makes the requested quantity degenerate.
    #[error("degenerate temperature regime: {reason}")]
    DegenerateRegime { reason: String },

    /// The stationary kernel is not numerically one-dimensional.
    #[error(
        "steady-state kernel is degenerate: second-smallest singular value \
         is {ratio:.3e} of the largest (threshold 1e-8)"
    )]
    DegenerateSteadyState { ratio: f64 },

    /// Time integration produced an invalid state.
    #[error("integration diverged at t = {time}: {reason}")]
    IntegrationDiverged { time: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, FridgeError>;
