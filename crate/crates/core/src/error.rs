use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("matrix is not symmetric: ‖S − Sᵀ‖_F = {asymmetry:e} exceeds {allowed:e}")]
    NotSymmetric { asymmetry: f64, allowed: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e} below {allowed:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, allowed: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subspace has dimension 0")]
    EmptySubspace,

    #[error("infeasible generator parameters: {0}")]
    InfeasibleSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
