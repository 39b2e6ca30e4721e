use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("elements belong to different algebras")]
    MixedAlgebra,
    #[error("unknown star structure '{0}' for this algebra")]
    UnknownStar(String),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("morphism '{0}' is only available in floating-point mode")]
    FloatOnly(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("wrong carrier: {0}")]
    WrongCarrier(String),
    #[error("margin violation: {0}")]
    Margin(String),
    #[error("factor count mismatch: expected {expected}, got {got}")]
    FactorMismatch { expected: usize, got: usize },
    #[error("series did not converge: {0}")]
    NoConvergence(String),
    #[error("quadrature insufficient: {0}")]
    Quadrature(String),
    #[error("singular linear map: {0}")]
    Singular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("simulation failed: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
