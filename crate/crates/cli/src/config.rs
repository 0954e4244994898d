//! Experiment configuration: flat `key = value` TOML.

use crate::expr::{self, Expr};
use crate::CliError;
use calderon2d::geometry::{Curve, PlanarDomain};
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// A number or an expression over `x`, `y`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Field {
    Num(f64),
    Expr(String),
}

impl Field {
    pub fn compile(&self, key: &str) -> Result<Expr, CliError> {
        match self {
            Field::Num(v) => Ok(Expr::Num(*v)),
            Field::Expr(s) => expr::parse(s).map_err(|e| CliError::config(format!("{key}: {e}"))),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn margin() -> f64 {
    0.1
}
fn five() -> usize {
    5
}
fn half_width() -> f64 {
    0.4
}
fn sign() -> i32 {
    1
}
fn order() -> usize {
    1
}
fn trials() -> usize {
    16
}
fn quadratic() -> String {
    "quadratic".into()
}
fn nodal() -> String {
    "nodal".into()
}
fn boundary() -> Field {
    Field::Expr("x".into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `disk`, `annulus` or `polygon`.
    pub domain: String,
    #[serde(default = "one")]
    pub radius: f64,
    pub inner_radius: Option<f64>,
    #[serde(default)]
    pub center: [f64; 2],
    /// Whitespace-separated `x y` lines; blank lines start a hole.
    pub polygon_file: Option<String>,
    pub target_h: f64,
    pub lambda: Option<Field>,

    /// Gaussian bumps `[cx, cy, width, amplitude]`.
    #[serde(default)]
    pub v1_bumps: Vec<[f64; 4]>,
    pub v1_expr: Option<String>,
    pub v1_file: Option<String>,
    pub v1_conductivity: Option<String>,
    pub v1_conductivity_expr: Option<String>,
    #[serde(default)]
    pub v2_bumps: Vec<[f64; 4]>,
    pub v2_expr: Option<String>,
    pub v2_file: Option<String>,
    pub v2_conductivity: Option<String>,
    pub v2_conductivity_expr: Option<String>,
    #[serde(default = "margin")]
    pub support_margin: f64,

    /// Dirichlet data for `forward`.
    #[serde(default = "boundary")]
    pub boundary: Field,

    pub h_list: Option<Vec<f64>>,
    #[serde(default)]
    pub point: [f64; 2],
    #[serde(default = "sign")]
    pub sign: i32,
    /// `nodal` or `amplitude`.
    #[serde(default = "nodal")]
    pub route: String,
    /// Multiplier on the quadratic phase.
    #[serde(default = "one")]
    pub phase_scale: f64,

    #[serde(default = "five")]
    pub grid_n: usize,
    #[serde(default = "half_width")]
    pub grid_half_width: f64,
    #[serde(default)]
    pub grid_center: [f64; 2],
    #[serde(default = "order")]
    pub order: usize,
    #[serde(default = "margin")]
    pub recovery_margin: f64,
    /// h values for the CGO scaling part of `convergence`.
    pub cgo_h_list: Option<Vec<f64>>,

    /// `quadratic` or `cubic`.
    #[serde(default = "quadratic")]
    pub carleman_weight: String,
    #[serde(default = "trials")]
    pub carleman_trials: usize,

    #[serde(default)]
    pub seed: u64,
    pub out: Option<String>,

    #[serde(skip)]
    pub base_dir: PathBuf,
    #[serde(skip)]
    pub source: String,
}

/// How one potential is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    Bumps(Vec<[f64; 4]>),
    Expr(String),
    File(PathBuf),
    Conductivity(PathBuf),
    ConductivityExpr(String),
}

impl ExperimentConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::config(format!("config parse error: {e}")))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.source = text.to_string();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn resolve(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.target_h > 0.0 && self.target_h.is_finite()) {
            return Err(CliError::config(format!("target_h must be positive, got {}", self.target_h)));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(CliError::config(format!("sign must be 1 or -1, got {}", self.sign)));
        }
        if !matches!(self.route.as_str(), "nodal" | "amplitude") {
            return Err(CliError::config(format!("route must be 'nodal' or 'amplitude', got '{}'", self.route)));
        }
        if !matches!(self.carleman_weight.as_str(), "quadratic" | "cubic") {
            return Err(CliError::config(format!("carleman_weight must be 'quadratic' or 'cubic', got '{}'", self.carleman_weight)));
        }
        for list in [&self.h_list, &self.cgo_h_list].into_iter().flatten() {
            if list.is_empty() || list.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
                return Err(CliError::config("h lists must be non-empty and positive"));
            }
        }
        if let Some(l) = &self.lambda {
            l.compile("lambda")?;
        }
        self.boundary.compile("boundary")?;
        for side in [1, 2] {
            if let PotentialSpec::File(p) | PotentialSpec::Conductivity(p) = self.potential(side)? {
                if !p.exists() {
                    return Err(CliError::config(format!("v{side}: file {} does not exist", p.display())));
                }
            }
            if let PotentialSpec::Expr(s) | PotentialSpec::ConductivityExpr(s) = self.potential(side)? {
                expr::parse(&s).map_err(|e| CliError::config(format!("v{side}: {e}")))?;
            }
        }
        if let Some(f) = &self.polygon_file {
            if !self.resolve(f).exists() {
                return Err(CliError::config(format!("polygon_file {f} does not exist")));
            }
        }
        Ok(())
    }

    pub fn potential(&self, side: usize) -> Result<PotentialSpec, CliError> {
        let (bumps, e, f, c, ce) = if side == 1 {
            (&self.v1_bumps, &self.v1_expr, &self.v1_file, &self.v1_conductivity, &self.v1_conductivity_expr)
        } else {
            (&self.v2_bumps, &self.v2_expr, &self.v2_file, &self.v2_conductivity, &self.v2_conductivity_expr)
        };
        let mut specs = Vec::new();
        if !bumps.is_empty() {
            specs.push(PotentialSpec::Bumps(bumps.clone()));
        }
        if let Some(e) = e {
            specs.push(PotentialSpec::Expr(e.clone()));
        }
        if let Some(f) = f {
            specs.push(PotentialSpec::File(self.resolve(f)));
        }
        if let Some(c) = c {
            specs.push(PotentialSpec::Conductivity(self.resolve(c)));
        }
        if let Some(c) = ce {
            specs.push(PotentialSpec::ConductivityExpr(c.clone()));
        }
        match specs.len() {
            0 => Ok(PotentialSpec::Zero),
            1 => Ok(specs.pop().unwrap()),
            _ => Err(CliError::config(format!("v{side} is specified more than one way"))),
        }
    }

    pub fn build_domain(&self) -> Result<PlanarDomain, CliError> {
        let r = match self.domain.as_str() {
            "disk" => PlanarDomain::new(Curve::circle(self.center, self.radius), vec![]),
            "annulus" => {
                let inner = self.inner_radius.ok_or_else(|| CliError::config("annulus needs inner_radius"))?;
                PlanarDomain::new(Curve::circle(self.center, self.radius), vec![Curve::circle(self.center, inner)])
            }
            "polygon" => {
                let f = self.polygon_file.as_ref().ok_or_else(|| CliError::config("polygon domain needs polygon_file"))?;
                let text = std::fs::read_to_string(self.resolve(f)).map_err(|e| CliError::config(format!("{f}: {e}")))?;
                let mut rings: Vec<Vec<[f64; 2]>> = vec![vec![]];
                for (ln, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.starts_with('#') {
                        continue;
                    }
                    if line.is_empty() {
                        if !rings.last().unwrap().is_empty() {
                            rings.push(vec![]);
                        }
                        continue;
                    }
                    let v: Vec<f64> = line
                        .split_whitespace()
                        .map(|t| t.parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| CliError::config(format!("{f}:{}: {e}", ln + 1)))?;
                    if v.len() != 2 {
                        return Err(CliError::config(format!("{f}:{}: expected 'x y'", ln + 1)));
                    }
                    rings.last_mut().unwrap().push([v[0], v[1]]);
                }
                rings.retain(|r| !r.is_empty());
                if rings.is_empty() {
                    return Err(CliError::config(format!("{f}: no vertices")));
                }
                let outer = Curve::polygon(rings.remove(0));
                PlanarDomain::new(outer, rings.into_iter().map(Curve::polygon).collect())
            }
            other => return Err(CliError::config(format!("unknown domain '{other}' (disk, annulus, polygon)"))),
        };
        r.map_err(CliError::from)
    }
}
