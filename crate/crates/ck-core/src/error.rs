use thiserror::Error;

/// Errors shared by the engines and the numerical oracles.
#[derive(Debug, Clone, Error)]
pub enum CkError {
    /// Parameter set outside the validated domain.
    #[error("rejected parameters: {0}")]
    RejectedParams(String),

    /// A quantity that must be real came out with a significant imaginary
    /// residue. Signals a coefficient/regime mismatch, not a user error.
    #[error("complex residue {residual:.3e} exceeds tolerance in {context}")]
    ComplexLeak { residual: f64, context: &'static str },

    /// Evaluation outside the numerically supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed: requested tol {tol:.3e}, best estimate {best:.6e}")]
    QuadratureFailure { tol: f64, best: f64 },

    /// Wavepacket probability reached the grid boundary.
    #[error("grid too small: {0}")]
    GridTooSmall(String),

    /// An ODE step produced a non-finite value.
    #[error("integration step rejected: {0}")]
    StepRejected(String),

    /// Quantum vs classical-statistical identity broken beyond tolerance.
    #[error("correspondence violated: {0}")]
    CorrespondenceViolation(String),
}

pub type Result<T> = std::result::Result<T, CkError>;
