use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NotConverged { sweeps: usize },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid channel {label:?}: completeness violated by {deviation:.3e}")]
    InvalidChannel { label: String, deviation: f64 },
    #[error("invalid projector set: {0}")]
    InvalidProjectors(String),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}
