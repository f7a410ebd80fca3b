use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not positive semi-definite (min eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },
    #[error("direction vector is not a unit vector (|w| = {norm})")]
    NotUnit { norm: f64 },
    #[error("point too close to the origin (R^2 = {r_sq:e})")]
    NearOrigin { r_sq: f64 },
    #[error("function is not flat at the origin (|f(0)| = {value:e})")]
    NotFlat { value: f64 },
    #[error("input is not invariant under the antipodal map (defect {defect:e})")]
    NotEven { defect: f64 },
    #[error("quadrature did not converge (successive refinements differ by {diff:e})")]
    NonConvergent { diff: f64 },
    #[error("flow left the admissible ball at radius {radius}")]
    Escape { radius: f64 },
    #[error("empty sample set")]
    EmptySamples,
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{stage} stage leaked {leak:e} of the mass")]
    Leakage { stage: &'static str, leak: f64 },
    #[error("provider failure: {0}")]
    Provider(String),
}

pub type Result<T> = std::result::Result<T, Error>;
