//! Single collector for every artifact of a run, flushed once with a manifest.

use crate::CliError;
use calderon2d::geometry::TriangleMesh;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct MeshStats {
    pub nodes: usize,
    pub triangles: usize,
    pub boundary: usize,
    pub components: usize,
    pub h_mesh: f64,
    pub min_angle_deg: f64,
    pub area: f64,
}

impl MeshStats {
    pub fn of(mesh: &TriangleMesh) -> Self {
        MeshStats {
            nodes: mesh.n_nodes(),
            triangles: mesh.n_triangles(),
            boundary: mesh.n_boundary,
            components: mesh.components.len(),
            h_mesh: mesh.h_mesh,
            min_angle_deg: mesh.min_angle_deg(),
            area: mesh.total_area(),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Artifacts keyed by path relative to the output directory, plus files
/// requested at explicit paths.
#[derive(Debug, Default)]
pub struct Collector {
    files: BTreeMap<String, Vec<u8>>,
    external: BTreeMap<PathBuf, Vec<u8>>,
    norms: BTreeMap<String, Value>,
    mesh: Option<MeshStats>,
}

impl Collector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn file(&mut self, name: impl Into<String>, contents: impl Into<Vec<u8>>) {
        self.files.insert(name.into(), contents.into());
    }

    pub fn external(&mut self, path: PathBuf, contents: impl Into<Vec<u8>>) {
        self.external.insert(path, contents.into());
    }

    pub fn norm(&mut self, key: impl Into<String>, value: impl Serialize) {
        self.norms.insert(key.into(), serde_json::to_value(value).expect("norm serializes"));
    }

    pub fn mesh(&mut self, mesh: &TriangleMesh) {
        self.mesh = Some(MeshStats::of(mesh));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.keys().cloned().collect()
    }

    /// Writes every artifact and `manifest.json`.
    pub fn finish(self, out: &Path, command: &str, config_text: &str, seed: u64) -> Result<(), CliError> {
        let io = |p: &Path, e: std::io::Error| CliError::config(format!("cannot write {}: {e}", p.display()));
        std::fs::create_dir_all(out).map_err(|e| io(out, e))?;
        let mut listing = BTreeMap::new();
        for (name, bytes) in &self.files {
            let path = out.join(name);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|e| io(parent, e))?;
            }
            std::fs::write(&path, bytes).map_err(|e| io(&path, e))?;
            listing.insert(name.clone(), sha256_hex(bytes));
        }
        for (path, bytes) in &self.external {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| io(parent, e))?;
            }
            std::fs::write(path, bytes).map_err(|e| io(path, e))?;
        }
        let manifest = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": sha256_hex(config_text.as_bytes()),
            "seed": seed,
            "mesh": self.mesh,
            "norms": self.norms,
            "files": listing,
        });
        let path = out.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        std::fs::write(&path, text).map_err(|e| io(&path, e))
    }
}
