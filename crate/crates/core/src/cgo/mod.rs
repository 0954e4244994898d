//! Complex geometric optics solutions `u = e^{Φ/h}(a + r₁ + r₂)`.

mod build;
mod cauchy;
mod cutoff;
mod remainder;
mod solution;
mod suite;

pub use build::{build_r11_eta, build_r12, build_rhs_oneform};
pub use cauchy::{triangle_kernel_exact, CauchyIntegrator, NEAR_FIELD};
pub use cutoff::{default_cutoffs, CutoffPair};
pub use remainder::{amplitude_residual, dual_norm, solve_r2_amplitude, solve_r2_nodal, AmplitudeOperator, R2Solve, R2Route};
pub use solution::{assemble_cgo, field_csv, CgoNorms, CgoOptions, CgoSolution, CgoWorkspace};
pub use suite::{loglog_slope, scaling_suite, ScalingSlopes, ScalingSuite};
