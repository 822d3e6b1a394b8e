use thiserror::Error;

/// Errors shared by the quadrature engine and the operator evaluators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive engine hit its depth limit with the error estimate
    /// still above tolerance. Carries the best available estimate.
    #[error("quadrature did not converge (value={value}, err_est={err_est}, n_evals={n_evals})")]
    NonConvergence {
        value: f64,
        err_est: f64,
        n_evals: u64,
    },

    /// NaN or infinity produced at an interior quadrature node.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A relative quantity was requested against a denominator that is
    /// indistinguishable from zero at the achieved accuracy.
    #[error("denominator below 10x its error estimate")]
    DivisionByNearZero,
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
