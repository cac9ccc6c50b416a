//! Error types shared by all evaluation routines.

/// Errors from integral evaluation and series summation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum FdError {
    /// Input outside a function's domain (gamma pole, wrong q class, ...).
    #[error("domain error: {what} (offending value {value})")]
    Domain { what: &'static str, value: f64 },

    /// A series or quadrature failed to reach the requested tolerance.
    #[error("convergence failure in {context}: achieved {achieved:e} after {steps} steps")]
    Convergence {
        context: &'static str,
        achieved: f64,
        steps: usize,
    },

    /// A method was requested that is incompatible with the parameters.
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, FdError>;
