use super::mesh::TriangleMesh;
use crate::linalg::Field;

/// Nodal gradient recovery by least-squares quadratic fits on two-ring
/// patches. Exact for quadratic fields.
#[derive(Debug, Clone)]
pub struct GradientRecovery {
    patches: Vec<Vec<usize>>,
    wx: Vec<Vec<f64>>,
    wy: Vec<Vec<f64>>,
}

impl GradientRecovery {
    pub fn new(mesh: &TriangleMesh) -> Self {
        let adj = mesh.node_neighbors();
        let n = mesh.n_nodes();
        let mut patches = Vec::with_capacity(n);
        let mut wx = Vec::with_capacity(n);
        let mut wy = Vec::with_capacity(n);
        for i in 0..n {
            let mut patch: Vec<usize> = vec![i];
            for &j in &adj[i] {
                patch.push(j);
                patch.extend_from_slice(&adj[j]);
            }
            patch.sort_unstable();
            patch.dedup();
            let o = mesh.vertices[i];
            let s = mesh.h_mesh;
            let rows: Vec<[f64; 6]> = patch
                .iter()
                .map(|&j| {
                    let x = (mesh.vertices[j][0] - o[0]) / s;
                    let y = (mesh.vertices[j][1] - o[1]) / s;
                    [1.0, x, y, x * x, x * y, y * y]
                })
                .collect();
            let mut ata = [[0.0f64; 6]; 6];
            for r in &rows {
                for a in 0..6 {
                    for b in 0..6 {
                        ata[a][b] += r[a] * r[b];
                    }
                }
            }
            let inv = invert6(ata);
            // coefficient k = sum_j (inv * A^T)_{k j} u_j
            let wgt = |k: usize| -> Vec<f64> {
                rows.iter().map(|r| (0..6).map(|b| inv[k][b] * r[b]).sum::<f64>() / s).collect()
            };
            wx.push(wgt(1));
            wy.push(wgt(2));
            patches.push(patch);
        }
        GradientRecovery { patches, wx, wy }
    }

    /// Recovered `(∂x u, ∂y u)` at every node.
    pub fn gradient<T: Field>(&self, u: &[T]) -> Vec<[T; 2]> {
        (0..self.patches.len())
            .map(|i| {
                let mut gx = T::zero();
                let mut gy = T::zero();
                for ((&j, &a), &b) in self.patches[i].iter().zip(&self.wx[i]).zip(&self.wy[i]) {
                    gx += u[j] * a;
                    gy += u[j] * b;
                }
                [gx, gy]
            })
            .collect()
    }
}

fn invert6(mut a: [[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut inv = [[0.0f64; 6]; 6];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for c in 0..6 {
        let p = (c..6).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for k in 0..6 {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for r in 0..6 {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for k in 0..6 {
                        a[r][k] -= f * a[c][k];
                        inv[r][k] -= f * inv[c][k];
                    }
                }
            }
        }
    }
    inv
}
