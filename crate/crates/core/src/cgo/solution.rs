use super::build::{build_r11_eta, build_r12, build_rhs_oneform};
use super::cauchy::CauchyIntegrator;
use super::cutoff::{default_cutoffs, CutoffPair};
use super::remainder::{amplitude_residual, dual_norm, solve_r2_amplitude, solve_r2_nodal, AmplitudeOperator, R2Route};
use crate::elliptic::{assemble, conjugation_guard, DiscreteOperator, PotentialField};
use crate::geometry::{ConformalFactor, GradientRecovery, Locator, PlanarDomain, TriangleMesh};
use crate::holomorphic::{cz, HolomorphicOneForm, HolomorphicPhase, RationalFunction};
use crate::par::ExecPolicy;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Mesh-level data shared by every CGO built on one mesh and metric.
pub struct CgoWorkspace<'a> {
    pub mesh: &'a TriangleMesh,
    pub domain: &'a PlanarDomain,
    pub lambda: &'a ConformalFactor,
    /// `Δ_g` without potential, for the Green operator.
    pub laplacian: DiscreteOperator,
    pub recovery: GradientRecovery,
    pub locator: Locator,
    pub cauchy: CauchyIntegrator<'a>,
}

impl<'a> CgoWorkspace<'a> {
    pub fn new(mesh: &'a TriangleMesh, domain: &'a PlanarDomain, lambda: &'a ConformalFactor) -> Self {
        CgoWorkspace {
            mesh,
            domain,
            lambda,
            laplacian: assemble(mesh, lambda, &PotentialField::zero(mesh)),
            recovery: GradientRecovery::new(mesh),
            locator: Locator::new(mesh),
            cauchy: CauchyIntegrator::new(mesh),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CgoOptions {
    pub route: R2Route,
    /// Iterative refinement steps in the `r₂` solve.
    pub refine_steps: usize,
    /// Defaults to [`default_cutoffs`].
    pub cutoffs: Option<Vec<CutoffPair>>,
    pub policy: ExecPolicy,
}

impl Default for CgoOptions {
    fn default() -> Self {
        CgoOptions { route: R2Route::Nodal, refine_steps: 2, cutoffs: None, policy: ExecPolicy::Parallel }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgoNorms {
    pub h: f64,
    pub r11_l2: f64,
    pub r12_inf: f64,
    pub eta_inf: f64,
    pub r2_l2: f64,
    /// `‖e^{-Φ/h}(Δ_g+V)e^{Φ/h}(a + r₁)‖` in the amplitude form, before `r₂`.
    pub residual: f64,
    /// Residual of the full amplitude in the chosen route, relative to its norm.
    pub residual_after: f64,
}

/// `u = e^{Φ/h}(a + r₁,₁ + r₁,₂ + r₂)` with nodal remainders.
#[derive(Debug, Clone)]
pub struct CgoSolution {
    pub h: f64,
    pub sign: i32,
    /// Phase actually used, `-Φ` when `sign = -1`.
    pub phase: HolomorphicPhase,
    pub omega: HolomorphicOneForm,
    pub route: R2Route,
    pub amplitude: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub r11: Vec<Complex64>,
    pub eta: Vec<Complex64>,
    pub r12: Vec<Complex64>,
    pub r2: Vec<Complex64>,
    /// `u` on the boundary nodes.
    pub trace: Vec<Complex64>,
    /// Weak normal derivative `(K u)` on the boundary nodes.
    pub normal: Vec<Complex64>,
    pub norms: CgoNorms,
}

impl CgoSolution {
    /// `a + r₁ + r₂` at the nodes.
    pub fn total_amplitude(&self) -> Vec<Complex64> {
        (0..self.amplitude.len()).map(|i| self.amplitude[i] + self.r11[i] + self.r12[i] + self.r2[i]).collect()
    }

    /// Nodal values of `u`.
    pub fn nodal_u(&self, mesh: &TriangleMesh) -> Vec<Complex64> {
        let w = self.total_amplitude();
        (0..w.len()).map(|i| w[i] * (self.phase.value(cz(mesh.vertices[i])) / self.h).exp()).collect()
    }

    pub fn norms_json(&self) -> String {
        serde_json::to_string_pretty(&self.norms).expect("norms serialize")
    }
}

/// One field as CSV `idx,re,im`.
pub fn field_csv(values: &[Complex64]) -> String {
    let mut s = String::from("idx,re,im\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{i},{:.17e},{:.17e}", v.re, v.im);
    }
    s
}

fn l2(mass: &crate::linalg::CsrMatrix, x: &[Complex64]) -> f64 {
    let mx = mass.mul_vec(x);
    x.iter().zip(&mx).map(|(a, b)| (a.conj() * b).re).sum::<f64>().max(0.0).sqrt()
}

fn sup(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Builds the CGO solution for `(Δ_g + V)u = 0`; `op` must be assembled
/// with `v`. `sign = -1` replaces `Φ` by `-Φ` throughout.
#[allow(clippy::too_many_arguments)]
pub fn assemble_cgo(
    ws: &CgoWorkspace,
    op: &DiscreteOperator,
    v: &PotentialField,
    phase: &HolomorphicPhase,
    a: &RationalFunction,
    h: f64,
    sign: i32,
    opts: &CgoOptions,
) -> Result<CgoSolution> {
    let mesh = ws.mesh;
    let phase = match sign {
        1 => phase.clone(),
        -1 => phase.negated(),
        _ => return Err(Error::InvalidInput(format!("sign must be +1 or -1, got {sign}"))),
    };
    let phi = phase.nodal_phi(mesh);
    let psi = phase.nodal_psi(mesh);
    conjugation_guard(&phi, h)?;
    let cuts = match &opts.cutoffs {
        Some(c) => c.clone(),
        None => default_cutoffs(&phase, ws.domain)?,
    };
    let amplitude = mesh.nodal(|p| a.eval(cz(p)));
    let (b, omega) = build_rhs_oneform(&ws.laplacian, mesh, &ws.recovery, &ws.locator, &amplitude, v, &phase)?;
    let (r11, eta) = build_r11_eta(mesh, &ws.cauchy, &b, &phase, h, &cuts, opts.policy);
    let r12 = build_r12(mesh, &eta, &b, &phase, h, &cuts)?;
    let base: Vec<Complex64> = (0..amplitude.len()).map(|i| amplitude[i] + r11[i] + r12[i]).collect();

    let nb = op.n_boundary;
    let amp = AmplitudeOperator::new(mesh, op, &phase);
    let residual = dual_norm(&amplitude_residual(&amp, nb, h, &base), &op.lumped[nb..]);
    let solve = match opts.route {
        R2Route::Amplitude => solve_r2_amplitude(&amp, op, h, &base, opts.refine_steps)?,
        R2Route::Nodal => solve_r2_nodal(op, &phi, &psi, h, &base, opts.refine_steps)?,
    };
    let r2 = solve.r2;
    let total: Vec<Complex64> = base.iter().zip(&r2).map(|(a, b)| a + b).collect();
    let scale = l2(&op.mass, &total).max(f64::MIN_POSITIVE);

    let u: Vec<Complex64> = (0..total.len()).map(|i| total[i] * (phase.value(cz(mesh.vertices[i])) / h).exp()).collect();
    let ku = op.system.mul_vec(&u);
    let norms = CgoNorms {
        h,
        r11_l2: l2(&op.mass, &r11),
        r12_inf: sup(&r12),
        eta_inf: sup(&eta),
        r2_l2: l2(&op.mass, &r2),
        residual,
        residual_after: solve.after / scale,
    };
    Ok(CgoSolution {
        h,
        sign,
        phase,
        omega,
        route: opts.route,
        amplitude,
        b,
        r11,
        eta,
        r12,
        r2,
        trace: u[..nb].to_vec(),
        normal: ku[..nb].to_vec(),
        norms,
    })
}
