use thiserror::Error;

/// Errors shared across the numerical modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature for {what} did not converge (best error {achieved:.3e})")]
    QuadratureNonConvergence { what: String, achieved: f64 },

    /// An integral required to be finite was flagged divergent.
    #[error("integral {what} is divergent")]
    Divergent { what: String },

    /// Low-|k| samples of a symbol do not follow a power law.
    #[error("symbol classification indeterminate: {msg}")]
    ClassificationIndeterminate { msg: String },

    /// Array shapes do not match the grid.
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    /// Root bracketing failed: no λ < 0 with μ(λ) = 1/σ on this grid.
    #[error("no Birman-Schwinger root found: {msg}")]
    NoRoot { msg: String },

    /// Iterative solver exhausted its budget.
    #[error("{op} did not converge within {budget} iterations")]
    NoConvergence { op: &'static str, budget: usize },

    /// Requested combination of potential variant and dimension is not
    /// supported by the radial reduction.
    #[error("not implemented: {msg}")]
    NotImplemented { msg: String },

    /// Scenario or spec validation failure (one message per violation).
    #[error("invalid specification: {}", violations.join("; "))]
    InvalidSpec { violations: Vec<String> },
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub fn invalid(violations: Vec<String>) -> Self {
        Error::InvalidSpec { violations }
    }
}
