//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by potential construction, operator assembly, and solvers.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A cutoff profile violates its defining constraints (e.g. the
    /// ultraviolet edge does not exceed the infrared edge).
    #[error("invalid cutoff profile: {0}")]
    InvalidProfile(String),

    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quadrature diverges near `k = 0`; the profile fails
    /// the infrared integrability condition required for a ground state.
    #[error("infrared divergence: {0}")]
    InfraredDivergence(String),

    /// A tabulation is too coarse to answer the question asked of it.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Mismatched array/grid shapes.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Assembling the operator would exceed the configured dimension cap.
    #[error("operator too large: requires dimension {required} (~{bytes_per_vector} bytes per vector), cap is {cap}")]
    DimensionCap {
        required: usize,
        cap: usize,
        bytes_per_vector: usize,
    },

    /// The operation needs equal particle masses (Jacobi reduction).
    #[error("unsupported masses: {0}")]
    UnequalMasses(String),

    /// An eigensolve did not reach the requested residual.
    #[error("solver did not converge: residual {residual:.3e} after {iterations} iterations (tol {tol:.3e})")]
    NonConvergence {
        residual: f64,
        iterations: usize,
        tol: f64,
    },

    /// A bisection bracket does not actually bracket the target.
    #[error("invalid bracket: {0}")]
    Bracket(String),
}
