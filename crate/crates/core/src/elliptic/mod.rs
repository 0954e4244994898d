//! Weak-form assembly of `Δ_g + V`, Dirichlet solves, DtN maps, conjugated
//! operators and the Carleman ratio check.

mod assemble;
mod carleman;
mod conjugate;
mod solve;

pub use assemble::{
    assemble, bump_value, collar, smallest_eigen_probe, smoothstep5, smoothstep5_prime, Bump, DiscreteOperator,
    PotentialField,
};
pub use carleman::{
    admissible_nodes, carleman_ratio, carleman_verify, weight_mass, CarlemanOptions, CarlemanReport, CarlemanRow,
};
pub use conjugate::{conjugated_apply, conjugated_matrix, conjugation_guard, convexify, MAX_EXPONENT};
pub use solve::{dirichlet_solve, dtn, first_dirichlet_eigenvalue, DtnMap};
