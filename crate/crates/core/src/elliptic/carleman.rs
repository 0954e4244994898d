use super::assemble::DiscreteOperator;
use super::conjugate::{conjugated_matrix, conjugation_guard};
use crate::geometry::{triangle_points, TriangleMesh};
use crate::holomorphic::{cz, HolomorphicPhase};
use crate::linalg::{CsrMatrix, EnvelopeLdl, TripletBuilder};
use crate::par::{map_slice, ExecPolicy};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct CarlemanOptions {
    pub trials: usize,
    pub min_iterations: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub policy: ExecPolicy,
}

impl Default for CarlemanOptions {
    fn default() -> Self {
        CarlemanOptions { trials: 16, min_iterations: 20, max_iterations: 300, seed: 0, policy: ExecPolicy::Parallel }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CarlemanRow {
    pub h: f64,
    pub rho: f64,
    pub rho_random: f64,
    pub rho_power: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CarlemanReport {
    pub rows: Vec<CarlemanRow>,
    pub max_rho: f64,
    pub median_rho: f64,
    /// `max ρ <= 2 median ρ` and every ρ finite.
    pub bounded: bool,
    /// ρ strictly increases as h decreases.
    pub growing: bool,
}

/// Nodes where admissible test fields may be nonzero: off the boundary and
/// off the first interior layer.
pub fn admissible_nodes(mesh: &TriangleMesh) -> Vec<usize> {
    let layers = mesh.boundary_layers();
    (0..mesh.n_nodes()).filter(|&i| layers[i] >= 2).collect()
}

/// `∫ |Φ'|² u v dx dy`, the weight `|dφ|²` taken from the exact phase.
pub fn weight_mass(mesh: &TriangleMesh, phase: &HolomorphicPhase) -> CsrMatrix {
    let n = mesh.n_nodes();
    let mut b = TripletBuilder::with_capacity(n, n, 9 * mesh.n_triangles());
    for t in 0..mesh.n_triangles() {
        let tri = mesh.triangles[t];
        let mut me = [[0.0; 3]; 3];
        for (p, l, w) in triangle_points(mesh, t) {
            let g = phase.d1(cz(p)).norm_sqr();
            for i in 0..3 {
                for j in 0..3 {
                    me[i][j] += w * g * l[i] * l[j];
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                b.push(tri[i], tri[j], me[i][j]);
            }
        }
    }
    b.build()
}

struct Pencil {
    n: CsrMatrix,
    q: CsrMatrix,
}

fn quad(a: &CsrMatrix, x: &[f64]) -> f64 {
    a.mul_vec(x).iter().zip(x).map(|(u, v)| u * v).sum()
}

fn pencil(op: &DiscreteOperator, wmass: &CsrMatrix, phi: &[f64], h: f64, nodes: &[usize]) -> Pencil {
    let n = op.stiffness
        .submatrix(nodes, nodes)
        .add(&op.mass.submatrix(nodes, nodes), 1.0 / h)
        .add(&wmass.submatrix(nodes, nodes), 1.0 / (h * h));
    let all: Vec<usize> = (0..op.n_nodes()).collect();
    let b = conjugated_matrix(&op.system, phi, h).submatrix(&all, nodes);
    let inv_lumped: Vec<f64> = op.lumped.iter().map(|m| 1.0 / m).collect();
    let q = b.transpose().gram_weighted(&inv_lumped);
    Pencil { n, q }
}

/// Ratio `[(1/h)‖u‖² + (1/h²)‖u|dφ|‖² + ‖du‖²] / ‖e^{-φ/h}(Δ_g+V)e^{φ/h}u‖²`
/// for a field on the admissible nodes.
pub fn carleman_ratio(
    op: &DiscreteOperator,
    wmass: &CsrMatrix,
    phi: &[f64],
    h: f64,
    nodes: &[usize],
    u: &[f64],
) -> Result<f64> {
    conjugation_guard(phi, h)?;
    let p = pencil(op, wmass, phi, h, nodes);
    Ok(quad(&p.n, u) / quad(&p.q, u))
}

pub fn carleman_verify(
    mesh: &TriangleMesh,
    op: &DiscreteOperator,
    phase: &HolomorphicPhase,
    h_list: &[f64],
    opts: &CarlemanOptions,
) -> Result<CarlemanReport> {
    let phi = phase.nodal_phi(mesh);
    for &h in h_list {
        conjugation_guard(&phi, h)?;
    }
    let nodes = admissible_nodes(mesh);
    let wmass = weight_mass(mesh, phase);
    let rows: Vec<Result<CarlemanRow>> = map_slice(opts.policy, h_list, |&h| {
        let p = pencil(op, &wmass, &phi, h, &nodes);
        let m = nodes.len();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ h.to_bits());
        let mut rho_random: f64 = 0.0;
        for _ in 0..opts.trials {
            let u: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            rho_random = rho_random.max(quad(&p.n, &u) / quad(&p.q, &u));
        }
        let f = EnvelopeLdl::factor(&p.q)?;
        let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut rho_power = 0.0;
        let mut converged = false;
        let mut iterations = 0;
        for it in 0..opts.max_iterations {
            iterations = it + 1;
            let y = f.solve(&p.n.mul_vec(&x));
            let r = quad(&p.n, &y) / quad(&p.q, &y);
            let norm = quad(&p.q, &y).sqrt();
            x = y.iter().map(|v| v / norm).collect();
            let change = (r - rho_power).abs() / r.abs();
            rho_power = r;
            if iterations >= opts.min_iterations && change < 1e-9 {
                converged = true;
                break;
            }
        }
        Ok(CarlemanRow { h, rho: rho_power.max(rho_random), rho_random, rho_power, iterations, converged })
    });
    let rows: Vec<CarlemanRow> = rows.into_iter().collect::<Result<_>>()?;
    let mut sorted: Vec<f64> = rows.iter().map(|r| r.rho).collect();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median_rho = if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    };
    let max_rho = sorted.last().copied().unwrap_or(f64::NAN);
    let bounded = rows.iter().all(|r| r.rho.is_finite()) && max_rho <= 2.0 * median_rho;
    let mut by_h = rows.clone();
    by_h.sort_by(|a, b| b.h.total_cmp(&a.h));
    let growing = by_h.windows(2).all(|w| w[1].rho > w[0].rho);
    Ok(CarlemanReport { rows, max_rho, median_rho, bounded, growing })
}
