use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point must be finite: {0}")]
    IdealPoint(String),
    #[error("point must be ideal: {0}")]
    FinitePoint(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("determinant {det} is not 1 (tolerance {tol:e})")]
    Determinant { det: f64, tol: f64 },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("coincident points: {0}")]
    Coincident(String),
    #[error("isometry is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("theta {theta} is inconsistent with the matrix (polar angle {polar})")]
    InconsistentLift { theta: f64, polar: f64 },
    #[error("classification ambiguous: {0}")]
    Ambiguous(String),
    #[error("ideal point lookup ambiguous: {0}")]
    IdealAmbiguous(String),
    #[error("element is not central: {0}")]
    NotCentral(String),
    #[error("degenerate polygon: {0}")]
    Degenerate(String),
    #[error("continuation failed: {0}")]
    Continuation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
