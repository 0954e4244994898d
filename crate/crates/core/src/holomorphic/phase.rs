use super::poly::Poly;
use super::rational::RationalFunction;
use crate::geometry::{PlanarDomain, TriangleMesh};
use crate::{Error, Result};
use num_complex::Complex64;

/// Holomorphic phase Φ with `φ = Re Φ`, `ψ = Im Φ`.
#[derive(Debug, Clone)]
pub struct HolomorphicPhase {
    pub phi: RationalFunction,
    dphi: RationalFunction,
    d2phi: RationalFunction,
    /// Critical points the construction was asked to place.
    pub critical_points: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseStyle {
    /// `(z - p)^2 / 2`.
    Quadratic,
    /// `Φ' = (z - p) ∏ (z - c)` over the extra critical points, `Φ(0) = 0`.
    Prescribed(Vec<Complex64>),
}

/// Minimum separation of critical points from the boundary and from each
/// other, as a fraction of the domain diameter.
pub const MORSE_MARGIN: f64 = 0.05;

impl HolomorphicPhase {
    pub fn new(phi: RationalFunction, critical_points: Vec<Complex64>) -> Self {
        let dphi = phi.derivative();
        let d2phi = dphi.derivative();
        HolomorphicPhase { phi, dphi, d2phi, critical_points }
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.phi.eval(z)
    }

    pub fn d1(&self, z: Complex64) -> Complex64 {
        self.dphi.eval(z)
    }

    pub fn d2(&self, z: Complex64) -> Complex64 {
        self.d2phi.eval(z)
    }

    pub fn derivative(&self) -> &RationalFunction {
        &self.dphi
    }

    /// `-Φ`, used for the second family of solutions.
    pub fn negated(&self) -> Self {
        let m = Complex64::new(-1.0, 0.0);
        let phi = RationalFunction { num: self.phi.num.scale(m), den: self.phi.den.clone() };
        HolomorphicPhase::new(phi, self.critical_points.clone())
    }

    /// `κΦ`; equivalent to replacing `h` by `h/κ`.
    pub fn scaled(&self, kappa: f64) -> Self {
        let k = Complex64::new(kappa, 0.0);
        let phi = RationalFunction { num: self.phi.num.scale(k), den: self.phi.den.clone() };
        HolomorphicPhase::new(phi, self.critical_points.clone())
    }

    pub fn nodal_phi(&self, mesh: &TriangleMesh) -> Vec<f64> {
        mesh.nodal(|p| self.value(Complex64::new(p[0], p[1])).re)
    }

    pub fn nodal_psi(&self, mesh: &TriangleMesh) -> Vec<f64> {
        mesh.nodal(|p| self.value(Complex64::new(p[0], p[1])).im)
    }
}

pub fn build_phase(p: Complex64, style: &PhaseStyle, domain: &PlanarDomain) -> Result<HolomorphicPhase> {
    let one = Complex64::new(1.0, 0.0);
    let (phi, crit) = match style {
        PhaseStyle::Quadratic => (Poly::new(vec![p * p * 0.5, -p, one * 0.5]), vec![p]),
        PhaseStyle::Prescribed(extra) => {
            let mut crit = vec![p];
            crit.extend_from_slice(extra);
            (Poly::from_roots(&crit).antiderivative(), crit)
        }
    };
    let margin = MORSE_MARGIN * domain.diameter();
    for (k, c) in crit.iter().enumerate() {
        let cp = [c.re, c.im];
        if !domain.contains(cp) || domain.distance_to_boundary(cp) < margin {
            return Err(Error::InvalidInput(format!("critical point {c} closer than {margin:.3} to the boundary")));
        }
        for d in &crit[..k] {
            if (c - d).norm() < margin {
                return Err(Error::InvalidInput(format!("critical points {c} and {d} are not separated")));
            }
        }
    }
    Ok(HolomorphicPhase::new(RationalFunction::polynomial(phi), crit))
}

#[derive(Debug, Clone)]
pub struct CriticalInfo {
    pub z: Complex64,
    pub second_derivative: Complex64,
    pub boundary_distance: f64,
}

#[derive(Debug, Clone)]
pub struct MorseReport {
    pub critical_points: Vec<CriticalInfo>,
    /// Zeros of Φ' inside the domain counted by the argument principle,
    /// `None` when Φ' vanishes on the boundary.
    pub argument_count: Option<i64>,
    pub passes: bool,
    pub diagnostics: Vec<String>,
}

/// Locate the critical points of Φ in the closed domain and certify that they
/// are nondegenerate, isolated from the boundary and all accounted for.
pub fn morse_check(phase: &HolomorphicPhase, domain: &PlanarDomain, mesh: &TriangleMesh) -> MorseReport {
    let diam = domain.diameter();
    let margin = MORSE_MARGIN * diam;
    let dphi = phase.derivative();
    let d2 = dphi.derivative();
    let scale = mesh
        .vertices
        .iter()
        .map(|p| dphi.eval(Complex64::new(p[0], p[1])).norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut roots: Vec<Complex64> = Vec::new();
    let mut seeds: Vec<Complex64> = (0..mesh.n_triangles())
        .step_by(7)
        .map(|t| {
            let c = mesh.centroid(t);
            Complex64::new(c[0], c[1])
        })
        .collect();
    seeds.extend(phase.critical_points.iter().copied());
    for seed in seeds {
        let mut z = seed;
        let mut ok = false;
        for _ in 0..100 {
            let f = dphi.eval(z);
            if f.norm() <= 1e-14 * scale {
                ok = true;
                break;
            }
            let g = d2.eval(z);
            if g.norm() == 0.0 || !g.norm().is_finite() {
                break;
            }
            let step = f / g;
            z -= step;
            if !z.re.is_finite() || z.norm() > 10.0 * diam + seed.norm() {
                break;
            }
            if step.norm() < 1e-15 * (1.0 + z.norm()) {
                ok = dphi.eval(z).norm() <= 1e-10 * scale;
                break;
            }
        }
        if !ok {
            continue;
        }
        let zp = [z.re, z.im];
        let in_closure = domain.contains(zp) || domain.distance_to_boundary(zp) < 1e-9 * diam;
        if in_closure && !roots.iter().any(|r| (r - z).norm() < 1e-6 * diam) {
            roots.push(z);
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());

    let mut diagnostics = Vec::new();
    let mut passes = true;
    let infos: Vec<CriticalInfo> = roots
        .iter()
        .map(|&z| CriticalInfo {
            z,
            second_derivative: d2.eval(z),
            boundary_distance: domain.distance_to_boundary([z.re, z.im]),
        })
        .collect();
    for c in &infos {
        if c.second_derivative.norm() < 1e-8 {
            passes = false;
            diagnostics.push(format!("degenerate critical point at {} (|Φ''| = {:.2e})", c.z, c.second_derivative.norm()));
        }
        if c.boundary_distance < margin {
            passes = false;
            diagnostics.push(format!(
                "critical point at {} is {:.3e} from the boundary (margin {margin:.3e})",
                c.z, c.boundary_distance
            ));
        }
    }
    for (i, a) in infos.iter().enumerate() {
        for b in &infos[..i] {
            if (a.z - b.z).norm() < margin {
                passes = false;
                diagnostics.push(format!("critical points {} and {} closer than the margin", a.z, b.z));
            }
        }
    }
    let argument_count = argument_principle_count(dphi, mesh);
    match argument_count {
        Some(n) => {
            if n != infos.len() as i64 {
                passes = false;
                diagnostics.push(format!(
                    "argument principle counts {n} zeros of Φ' but {} distinct critical points were found",
                    infos.len()
                ));
            }
        }
        None => {
            passes = false;
            diagnostics.push("Φ' vanishes on the boundary".into());
        }
    }
    MorseReport { critical_points: infos, argument_count, passes, diagnostics }
}

/// Total winding of `f` along the oriented mesh boundary, refining each
/// boundary edge until the argument changes by less than 0.5 rad per step.
pub fn argument_principle_count(f: &RationalFunction, mesh: &TriangleMesh) -> Option<i64> {
    let mut total = 0.0;
    let floor = mesh
        .vertices
        .iter()
        .map(|p| f.eval(Complex64::new(p[0], p[1])).norm())
        .fold(0.0f64, f64::max)
        * 1e-12;
    for e in &mesh.boundary_edges {
        let a = mesh.vertices[e.nodes[0]];
        let b = mesh.vertices[e.nodes[1]];
        let za = Complex64::new(a[0], a[1]);
        let zb = Complex64::new(b[0], b[1]);
        total += winding_segment(f, za, zb, floor, 0)?;
    }
    Some((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

fn winding_segment(f: &RationalFunction, a: Complex64, b: Complex64, floor: f64, depth: usize) -> Option<f64> {
    let fa = f.eval(a);
    let fb = f.eval(b);
    if fa.norm() <= floor || fb.norm() <= floor {
        return None;
    }
    let d = (fb / fa).arg();
    if d.abs() < 0.5 || depth > 40 {
        return Some(d);
    }
    let m = (a + b) * 0.5;
    Some(winding_segment(f, a, m, floor, depth + 1)? + winding_segment(f, m, b, floor, depth + 1)?)
}
