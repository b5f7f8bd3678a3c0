use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("hull construction failed: {0}")]
    HullFailure(String),
    #[error("bad body specification: {0}")]
    BadSpec(String),
    #[error("mixed area measure has negative atom of mass {mass:e} (total {total:e})")]
    NegativeMass { mass: f64, total: f64 },
    #[error("adaptive quadrature did not reach tolerance {tol:e} within depth {depth}")]
    QuadratureFailure { tol: f64, depth: usize },
    #[error("bad mesh: {0}")]
    BadMesh(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("insufficient spectrum: {0}")]
    InsufficientSpectrum(String),
    #[error("covariance matrix G_M is singular")]
    SingularGM,
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
