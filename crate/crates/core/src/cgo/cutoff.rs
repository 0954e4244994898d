use crate::elliptic::{smoothstep5, smoothstep5_prime};
use crate::geometry::PlanarDomain;
use crate::holomorphic::HolomorphicPhase;
use crate::{Error, Result};
use num_complex::Complex64;

/// Radial cutoffs around a critical point: `χ₁ = 1` on `|z-p| <= ρ₁` and
/// vanishes beyond `(ρ₁+ρ₂)/2`, where `χ` starts falling to zero at `ρ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPair {
    pub center: Complex64,
    pub rho1: f64,
    pub rho2: f64,
}

impl CutoffPair {
    pub fn new(center: Complex64, rho1: f64, rho2: f64) -> Result<Self> {
        if !(rho1 > 0.0 && rho2 > rho1) {
            return Err(Error::InvalidInput(format!("cutoff radii must satisfy 0 < ρ₁ < ρ₂, got {rho1}, {rho2}")));
        }
        Ok(CutoffPair { center, rho1, rho2 })
    }

    fn mid(&self) -> f64 {
        0.5 * (self.rho1 + self.rho2)
    }

    pub fn chi1(&self, z: Complex64) -> f64 {
        let r = (z - self.center).norm();
        1.0 - smoothstep5((r - self.rho1) / (self.mid() - self.rho1))
    }

    pub fn chi(&self, z: Complex64) -> f64 {
        let r = (z - self.center).norm();
        1.0 - smoothstep5((r - self.mid()) / (self.rho2 - self.mid()))
    }

    /// `∂χ/∂z`.
    pub fn dchi(&self, z: Complex64) -> Complex64 {
        let w = z - self.center;
        let r = w.norm();
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let width = self.rho2 - self.mid();
        let ds = -smoothstep5_prime((r - self.mid()) / width) / width;
        w.conj() * (ds / (2.0 * r))
    }
}

/// Default pair per critical point: `ρ₁ = 0.15 d`, `ρ₂ = 0.3 d` with `d` the
/// distance to the boundary and to the other critical points.
pub fn default_cutoffs(phase: &HolomorphicPhase, domain: &PlanarDomain) -> Result<Vec<CutoffPair>> {
    let crit = &phase.critical_points;
    crit.iter()
        .map(|&c| {
            let mut d = domain.distance_to_boundary([c.re, c.im]);
            for &o in crit {
                if o != c {
                    d = d.min((o - c).norm());
                }
            }
            CutoffPair::new(c, 0.15 * d, 0.3 * d)
        })
        .collect()
}
