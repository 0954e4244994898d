use super::mesh::{BoundaryEdge, TriangleMesh};
use crate::{Error, Result};
use std::fmt::Write as _;

/// Plain-text mesh format: header `mesh2d 1`, then `v x y`, `t i j k` and
/// `be i j comp` lines with 0-based indices.
pub fn write_mesh(mesh: &TriangleMesh) -> String {
    let mut s = String::from("mesh2d 1\n");
    for v in &mesh.vertices {
        writeln!(s, "v {:.17e} {:.17e}", v[0], v[1]).unwrap();
    }
    for t in &mesh.triangles {
        writeln!(s, "t {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    for e in &mesh.boundary_edges {
        writeln!(s, "be {} {} {}", e.nodes[0], e.nodes[1], e.component).unwrap();
    }
    s
}

/// Parses the format written by [`write_mesh`]. Boundary nodes must be
/// numbered first, as they are in generated meshes.
pub fn read_mesh(text: &str) -> Result<TriangleMesh> {
    let bad = |line: usize, msg: &str| Error::InvalidInput(format!("mesh line {}: {msg}", line + 1));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == "mesh2d 1" => {}
        _ => return Err(Error::InvalidInput("mesh header must be `mesh2d 1`".into())),
    }
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut boundary_edges = Vec::new();
    for (ln, line) in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.is_empty() {
            continue;
        }
        let num = |k: usize| tok.get(k).ok_or_else(|| bad(ln, "missing field"));
        match tok[0] {
            "v" => {
                let x: f64 = num(1)?.parse().map_err(|_| bad(ln, "bad coordinate"))?;
                let y: f64 = num(2)?.parse().map_err(|_| bad(ln, "bad coordinate"))?;
                vertices.push([x, y]);
            }
            "t" => {
                let mut t = [0usize; 3];
                for (k, slot) in t.iter_mut().enumerate() {
                    *slot = num(k + 1)?.parse().map_err(|_| bad(ln, "bad index"))?;
                }
                triangles.push(t);
            }
            "be" => {
                let i: usize = num(1)?.parse().map_err(|_| bad(ln, "bad index"))?;
                let j: usize = num(2)?.parse().map_err(|_| bad(ln, "bad index"))?;
                let c: usize = num(3)?.parse().map_err(|_| bad(ln, "bad component"))?;
                boundary_edges.push(BoundaryEdge { nodes: [i, j], component: c });
            }
            _ => return Err(bad(ln, "unknown record")),
        }
    }
    let n = vertices.len();
    if triangles.iter().flatten().chain(boundary_edges.iter().flat_map(|e| e.nodes.iter())).any(|&i| i >= n) {
        return Err(Error::InvalidInput("mesh index out of range".into()));
    }
    let n_comp = boundary_edges.iter().map(|e| e.component + 1).max().unwrap_or(0);
    let mut components = Vec::with_capacity(n_comp);
    let mut n_boundary = 0;
    for c in 0..n_comp {
        let nodes: Vec<usize> = boundary_edges.iter().filter(|e| e.component == c).map(|e| e.nodes[0]).collect();
        let (lo, hi) = (*nodes.iter().min().unwrap(), *nodes.iter().max().unwrap());
        if lo != n_boundary || hi + 1 - lo != nodes.len() {
            return Err(Error::InvalidInput(format!("boundary component {c} is not numbered contiguously")));
        }
        components.push(lo..hi + 1);
        n_boundary = hi + 1;
    }
    let mut mesh = TriangleMesh {
        vertices,
        triangles,
        boundary_edges,
        components,
        n_boundary,
        h_mesh: 0.0,
        target_h: 0.0,
    };
    mesh.h_mesh = mesh.max_edge_length();
    mesh.target_h = mesh.h_mesh;
    Ok(mesh)
}
