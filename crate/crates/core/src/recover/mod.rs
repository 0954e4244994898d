//! Identification of `V₁ - V₂` from boundary data through CGO pairings.

mod conductivity;
mod output;
mod pairing;
mod point;
mod stationary;

pub use conductivity::conductivity_to_potential;
pub use output::{reconstruction_csv, reconstruction_svg};
pub use pairing::{alessandrini_pairing, correction_term, volume_pairing};
pub use point::{recover_grid, recover_point, richardson, square_grid, GridReport, HSample, PointEstimate, RecoveryConfig, RecoveryContext};
pub use stationary::{gauss_legendre, oscillatory_integral, stationary_constant, StationaryData};
