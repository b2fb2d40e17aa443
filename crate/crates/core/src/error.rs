use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("deformation gradient is not invertible with positive determinant (det = {det:e})")]
    NonPositiveJacobian { det: f64 },

    #[error("matrix is not orthogonal (max |QᵀQ - I| = {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("second-order tensor is not traceless (trace = {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("tensor lacks the required index symmetry (max deviation = {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("stretch tensor is singular (det U = {det:e})")]
    SingularStretch { det: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("torsion energy is not positive (semi-)definite: {0}")]
    IndefiniteEnergy(String),

    #[error("linear system is singular or not positive definite at pivot {pivot}")]
    SingularSystem { pivot: usize },

    #[error("operation requires {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
