//! Crate-wide error type. Variants carry the stable error codes the CLI
//! prints, so library callers and shell scripts see the same identifiers.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which admissibility bound a rejected penalty term violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaBound {
    /// Upper bound `1/beta0` coming from positivity of the Lyapunov sandwich.
    ReciprocalBeta0,
    /// Upper bound `gamma * m_inf / (2 m_sup)` coming from the damping budget.
    GammaMassRatio,
    /// Lower bound `lambda > 0`.
    Positivity,
}

impl std::fmt::Display for LambdaBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaBound::ReciprocalBeta0 => write!(f, "1/beta0"),
            LambdaBound::GammaMassRatio => write!(f, "gamma*m_inf/(2*m_sup)"),
            LambdaBound::Positivity => write!(f, "lambda > 0"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("DOMAIN_ERROR: {0}")]
    Domain(String),

    #[error("MESH_INCOMPATIBLE: {0}")]
    MeshIncompatible(String),

    #[error("RESOLUTION_ERROR: {0}")]
    Resolution(String),

    #[error("NUMERICAL_ERROR: {0}")]
    Numerical(String),

    #[error("CERTIFICATE_INELIGIBLE: proportional damping constant must be positive")]
    CertificateIneligible,

    #[error("LAMBDA_INADMISSIBLE: lambda = {lambda} violates {bound} = {limit}")]
    LambdaInadmissible {
        lambda: f64,
        bound: LambdaBound,
        limit: f64,
    },

    #[error("PRECONDITION_VIOLATION: {0}")]
    Precondition(String),

    #[error("INSUFFICIENT_DATA: {0}")]
    InsufficientData(String),

    #[error("RATE_UNDEFINED: energy reaches zero inside the measurement window")]
    RateUndefined,

    #[error("CONFIG_ERROR: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
