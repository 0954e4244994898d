//! Numerical toolkit for the inverse Schrödinger problem on planar domains
//! with a conformal metric: forward solves, Dirichlet-to-Neumann maps,
//! Carleman checks, complex geometrical optics solutions and pointwise
//! recovery of the potential from boundary data.

pub mod cgo;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod holomorphic;
pub mod linalg;
pub mod par;
pub mod recover;

pub use error::{Error, ErrorClass, Result};
pub use num_complex::Complex64;
pub use par::ExecPolicy;
