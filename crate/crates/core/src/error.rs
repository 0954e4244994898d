use thiserror::Error;

/// Failure classes. The CLI maps [`Error::class`] onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("mesh quality violation: {0}")]
    MeshQuality(String),
    #[error("point {0:?} lies outside the mesh")]
    OutsideMesh([f64; 2]),
    #[error("numeric guard: {0}")]
    Guard(String),
    #[error("Dirichlet eigenvalue hit ({0}); shift the potential by a small constant or change the mesh")]
    DirichletEigenvalue(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Guard,
    Solver,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) | Error::DegenerateDomain(_) | Error::Io(_) => ErrorClass::Config,
            Error::MeshQuality(_) | Error::OutsideMesh(_) | Error::Guard(_) => ErrorClass::Guard,
            Error::DirichletEigenvalue(_) | Error::Solver(_) => ErrorClass::Solver,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
