//! Planar domains, triangulation, quadrature and homology loops.

mod domain;
mod homology;
mod io;
mod locate;
mod mesh;
mod quadrature;
mod recovery;

pub use domain::{Curve, PlanarDomain, Point};
pub use homology::{homology_basis, interior_point, winding_matrix, winding_number, HomologyLoop};
pub use io::{read_mesh, write_mesh};
pub use locate::{barycentric, Locator};
pub use mesh::{generate_mesh, generate_mesh_with, BoundaryEdge, MeshOptions, TriangleMesh};
pub use quadrature::{integrate_fn, integrate_nodal, triangle_points, ConformalFactor, QuadRule, DUNAVANT6};
pub use recovery::GradientRecovery;
