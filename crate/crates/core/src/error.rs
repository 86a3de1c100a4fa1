use nalgebra::DMatrix;
use thiserror::Error;

/// Errors raised by the uncertainty toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("shape error: {0}")]
    Shape(String),

    /// The matrix is not (sufficiently) positive definite. When raised by the
    /// consistency solver, `matrix` holds the covariance at which the gradient
    /// matrix lost definiteness.
    #[error("matrix is not positive definite: {reason}")]
    NotPositiveDefinite {
        reason: String,
        matrix: Option<Box<DMatrix<f64>>>,
    },

    #[error("covariance matrix is not quantum-admissible (min symplectic eigenvalue {min_eig:.6e} < hbar/2 = {half_hbar:.6e})")]
    Inadmissible { min_eig: f64, half_hbar: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("arity mismatch: expected {expected} modes, got {got}")]
    Arity { expected: usize, got: usize },
}

impl Error {
    pub(crate) fn not_pd(reason: impl Into<String>) -> Self {
        Error::NotPositiveDefinite {
            reason: reason.into(),
            matrix: None,
        }
    }

    /// True for errors that signal unphysical input rather than bad usage.
    pub fn is_physics(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::Inadmissible { .. }
                | Error::Domain(_)
                | Error::Degenerate(_)
                | Error::Constraint(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
