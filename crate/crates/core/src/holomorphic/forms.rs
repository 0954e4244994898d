use super::phase::HolomorphicPhase;
use super::poly::Poly;
use crate::geometry::{GradientRecovery, HomologyLoop, Locator, TriangleMesh};
use crate::{Error, Result};
use num_complex::Complex64;

/// Holomorphic one-form `w(z) dz` with polynomial coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicOneForm {
    pub w: Poly,
}

impl HolomorphicOneForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.w.eval(z)
    }
}

/// Amplitude equal to one at `p` and vanishing at the other critical points.
pub fn amplitude_build(phase: &HolomorphicPhase, p: Complex64) -> Result<Poly> {
    let others: Vec<Complex64> = phase.critical_points.iter().copied().filter(|c| (c - p).norm() > 1e-12).collect();
    if others.len() + 1 != phase.critical_points.len() {
        return Err(Error::InvalidInput(format!("{p} is not one of the phase's critical points")));
    }
    let basis = Poly::from_roots(&others);
    let at_p = basis.eval(p);
    Ok(basis.scale(Complex64::new(1.0, 0.0) / at_p))
}

/// One-form taking the prescribed values at the given points.
pub fn omega_correction(targets: &[(Complex64, Complex64)]) -> HolomorphicOneForm {
    HolomorphicOneForm { w: Poly::interpolate(targets) }
}

/// `(1 / πi) ∮ ∂u` along each loop for a nodal field `u`, with `∂u` taken
/// from recovered nodal gradients.
pub fn period_functional(
    mesh: &TriangleMesh,
    u: &[f64],
    loops: &[HomologyLoop],
    recovery: &GradientRecovery,
    locator: &Locator,
) -> Result<Vec<Complex64>> {
    let grad = recovery.gradient(u);
    let dz: Vec<Complex64> = grad.iter().map(|g| Complex64::new(g[0], -g[1]) * 0.5).collect();
    let gauss = [(-(0.6f64).sqrt(), 5.0 / 9.0), (0.0, 8.0 / 9.0), ((0.6f64).sqrt(), 5.0 / 9.0)];
    loops
        .iter()
        .map(|l| {
            let n = l.points.len();
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let a = l.points[i];
                let b = l.points[(i + 1) % n];
                let seg = Complex64::new(b[0] - a[0], b[1] - a[1]);
                for &(x, w) in &gauss {
                    let t = 0.5 * (x + 1.0);
                    let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                    let v = locator.interpolate(mesh, &dz, p).ok_or(Error::OutsideMesh(p))?;
                    acc += v * seg * (0.5 * w);
                }
            }
            Ok(acc / Complex64::new(0.0, std::f64::consts::PI))
        })
        .collect()
}
