use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A constructor or operation was handed structurally invalid input
    /// (wrong dimension, out-of-range index, non-finite entry, parameter
    /// outside its domain).
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Dimension mismatch between operands.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The QR iteration did not converge within the sweep cap.
    #[error(
        "eigensolver failed to converge: dim={dim}, frobenius_norm={norm:.6e}, sweeps={sweeps}"
    )]
    NonConvergence { dim: usize, norm: f64, sweeps: usize },

    /// The singular-value iteration did not converge within the sweep cap.
    #[error("singular-value sweep cap exceeded: dim={rows}x{cols}, sweeps={sweeps}")]
    SvdNonConvergence { rows: usize, cols: usize, sweeps: usize },

    /// A configuration value violates an operational precondition
    /// (e.g. an integrator step size too large for stability).
    #[error("configuration error: {0}")]
    Config(String),

    /// Time integration produced a non-finite amplitude.
    #[error("integration failure: non-finite amplitude after t={last_good_time}")]
    IntegrationFailure { last_good_time: f64 },

    /// A linear solve hit an exactly singular pivot.
    #[error("singular linear system in {0}")]
    SingularSystem(&'static str),
}
