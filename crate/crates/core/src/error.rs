use thiserror::Error;

/// Failures raised by the numerical routines.
///
/// `InvalidInput` means the caller violated a precondition; every other variant
/// signals a numerical breakdown (non-convergence, failed certificate, branch trouble).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("node {index} did not converge (residual {residual:e})")]
    NodeConvergence { index: usize, residual: f64 },

    #[error("non-finite integrand at node {index} (x = {x})")]
    NonFinite { index: usize, x: f64 },

    #[error("imaginary part {imag:e} exceeds tolerance {tol:e} at entry ({row}, {col})")]
    NotReal { row: usize, col: usize, imag: f64, tol: f64 },

    #[error("contours intersect: |denominator| = {0:e}")]
    ContourIntersection(f64),

    #[error("radial solve diverged at angle {theta}")]
    RadialSolve { theta: f64 },

    #[error("point {0} lies on the curve (side ambiguous)")]
    OnCurve(String),

    #[error("convergence certificate failed: {what} (measured {measured:e}, required {required:e})")]
    Certificate { what: String, measured: f64, required: f64 },

    #[error("singular system (pivot {pivot:e} at step {step}); try more working digits or a smaller degree")]
    Singular { step: usize, pivot: f64 },

    #[error("root iteration failed to converge after {iterations} iterations (max correction {correction:e})")]
    RootConvergence { iterations: usize, correction: f64 },

    #[error("empty level set: {0}")]
    EmptyLevelSet(String),
}

impl Error {
    /// True for precondition violations, false for numerical breakdowns.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
