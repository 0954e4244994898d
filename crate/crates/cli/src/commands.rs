use crate::config::{ExperimentConfig, PotentialSpec};
use crate::expr;
use crate::output::Collector;
use crate::{Args, CliError, Command};
use calderon2d::cgo::{assemble_cgo, field_csv, scaling_suite, CgoOptions, CgoWorkspace, R2Route};
use calderon2d::elliptic::{
    assemble, carleman_verify, collar, dirichlet_solve, dtn, Bump, CarlemanOptions, DiscreteOperator, PotentialField,
};
use calderon2d::geometry::{generate_mesh, write_mesh, ConformalFactor, PlanarDomain, Point, TriangleMesh};
use calderon2d::holomorphic::{amplitude_build, build_phase, cz, HolomorphicPhase, PhaseStyle, Poly, RationalFunction};
use calderon2d::recover::{
    conductivity_to_potential, recover_grid, recover_point, reconstruction_csv, reconstruction_svg, square_grid,
    RecoveryConfig, RecoveryContext,
};
use calderon2d::ExecPolicy;
use serde_json::json;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const CGO_H: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
const CARLEMAN_H: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
const RECOVERY_H: [f64; 5] = [0.4, 0.28, 0.2, 0.14, 0.1];

/// Mesh, metric and potentials shared by every command.
struct Setup {
    cfg: ExperimentConfig,
    domain: PlanarDomain,
    mesh: TriangleMesh,
    lambda: ConformalFactor,
    v1: PotentialField,
    v2: PotentialField,
    policy: ExecPolicy,
}

impl Setup {
    fn new(cfg: ExperimentConfig, args: &Args) -> Result<Self, CliError> {
        let domain = cfg.build_domain()?;
        let mesh = generate_mesh(&domain, cfg.target_h)?;
        let lambda = match &cfg.lambda {
            None => ConformalFactor::flat(&mesh),
            Some(f) => {
                let e = f.compile("lambda")?;
                ConformalFactor::from_fn(&mesh, |p| e.eval(p[0], p[1]))
            }
        };
        if let Some((i, v)) = lambda.values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(CliError::config(format!("lambda is not finite at node {i} ({v})")));
        }
        let v1 = match &args.potential {
            Some(p) => PotentialField::from_values(read_nodal(p, mesh.n_nodes())?),
            None => potential(&cfg, 1, &domain, &mesh, &lambda)?,
        };
        let v2 = potential(&cfg, 2, &domain, &mesh, &lambda)?;
        let policy = if args.jobs == Some(1) { ExecPolicy::Sequential } else { ExecPolicy::Parallel };
        Ok(Setup { cfg, domain, mesh, lambda, v1, v2, policy })
    }

    fn cgo_options(&self) -> CgoOptions {
        let route = if self.cfg.route == "amplitude" { R2Route::Amplitude } else { R2Route::Nodal };
        CgoOptions { route, policy: self.policy, ..CgoOptions::default() }
    }

    fn phase(&self, p: Point) -> Result<(HolomorphicPhase, RationalFunction), CliError> {
        let zp = cz(p);
        let phase = build_phase(zp, &PhaseStyle::Quadratic, &self.domain)?;
        let a = RationalFunction::polynomial(amplitude_build(&phase, zp)?);
        Ok((phase.scaled(self.cfg.phase_scale), a))
    }
}

/// Nodal CSV `idx,value`; a header line is allowed.
fn read_nodal(path: &Path, n: usize) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let mut values = vec![f64::NAN; n];
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (ln == 0 && line.starts_with("idx")) {
            continue;
        }
        let bad = || CliError::config(format!("{}:{}: expected 'idx,value'", path.display(), ln + 1));
        let (i, v) = line.split_once(',').ok_or_else(bad)?;
        let i: usize = i.trim().parse().map_err(|_| bad())?;
        let v: f64 = v.trim().parse().map_err(|_| bad())?;
        if i >= n {
            return Err(CliError::config(format!("{}:{}: node {i} out of range (mesh has {n})", path.display(), ln + 1)));
        }
        values[i] = v;
    }
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(CliError::config(format!("{}: no value for node {i}", path.display())));
    }
    Ok(values)
}

fn potential(
    cfg: &ExperimentConfig,
    side: usize,
    domain: &PlanarDomain,
    mesh: &TriangleMesh,
    lambda: &ConformalFactor,
) -> Result<PotentialField, CliError> {
    let margin = cfg.support_margin;
    let compile = |s: &str| expr::parse(s).map_err(|e| CliError::config(format!("v{side}: {e}")));
    let gamma_potential = |gamma: Vec<f64>| -> Result<PotentialField, CliError> {
        let lap = assemble(mesh, lambda, &PotentialField::zero(mesh));
        Ok(conductivity_to_potential(&gamma, &lap)?)
    };
    match cfg.potential(side)? {
        PotentialSpec::Zero => Ok(PotentialField::zero(mesh)),
        PotentialSpec::Bumps(list) => {
            let bumps: Vec<Bump> =
                list.iter().map(|b| Bump { center: [b[0], b[1]], width: b[2], amplitude: b[3] }).collect();
            if bumps.iter().any(|b| !(b.width > 0.0)) {
                return Err(CliError::config(format!("v{side}_bumps: widths must be positive")));
            }
            Ok(PotentialField::bumps(mesh, domain, &bumps, margin))
        }
        PotentialSpec::Expr(s) => {
            let e = compile(&s)?;
            let mut v = PotentialField::from_fn(mesh, |p| e.eval(p[0], p[1]) * collar(domain, margin, p));
            v.support_margin = margin;
            Ok(v)
        }
        PotentialSpec::File(p) => Ok(PotentialField::from_values(read_nodal(&p, mesh.n_nodes())?)),
        PotentialSpec::Conductivity(p) => gamma_potential(read_nodal(&p, mesh.n_nodes())?),
        PotentialSpec::ConductivityExpr(s) => {
            let e = compile(&s)?;
            gamma_potential(mesh.nodal(|p| e.eval(p[0], p[1])))
        }
    }
}

fn parse_point(s: &str) -> Result<Point, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::config(format!("--point expects 'x,y', got '{s}'")))?;
    match v[..] {
        [x, y] => Ok([x, y]),
        _ => Err(CliError::config(format!("--point expects 'x,y', got '{s}'"))),
    }
}

fn parse_h_list(s: &str) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::config(format!("--h expects a comma-separated list, got '{s}'")))?;
    if v.is_empty() || v.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(CliError::config("--h values must be positive"));
    }
    Ok(v)
}

fn h_tag(h: f64) -> String {
    format!("h{h}")
}

fn out_dir(cfg: &ExperimentConfig, args: &Args) -> PathBuf {
    match (&args.out, &cfg.out) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => cfg.resolve(o),
        (None, None) => PathBuf::from("out"),
    }
}

/// Runs one command end to end and writes its artifacts.
pub fn run(args: &Args) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let out = out_dir(&cfg, args);
    let seed = cfg.seed;
    let source = cfg.source.clone();
    let s = Setup::new(cfg, args)?;
    let mut c = Collector::new();
    c.mesh(&s.mesh);
    if let Some(p) = &args.mesh_out {
        c.external(p.clone(), write_mesh(&s.mesh));
    }
    match args.command {
        Command::Forward => forward(&s, &mut c)?,
        Command::Dtn => dtn_cmd(&s, args, &mut c)?,
        Command::CgoBuild => cgo_build(&s, args, &mut c)?,
        Command::CarlemanCheck => carleman(&s, args, &mut c)?,
        Command::Reconstruct => reconstruct(&s, &mut c)?,
        Command::Convergence => convergence(&s, args, &mut c)?,
    }
    c.finish(&out, args.command.name(), &source, seed)
}

fn forward(s: &Setup, c: &mut Collector) -> Result<(), CliError> {
    let op = assemble(&s.mesh, &s.lambda, &s.v1);
    let e = s.cfg.boundary.compile("boundary")?;
    let f: Vec<f64> = s.mesh.vertices[..s.mesh.n_boundary].iter().map(|p| e.eval(p[0], p[1])).collect();
    let u = dirichlet_solve(&op, None::<&[f64]>, &f)?;
    let mut csv = String::from("idx,x,y,u\n");
    for (i, (p, v)) in s.mesh.vertices.iter().zip(&u).enumerate() {
        let _ = writeln!(csv, "{i},{:.17e},{:.17e},{v:.17e}", p[0], p[1]);
    }
    c.file("u.csv", csv);
    let max = u.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let min = u.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    c.norm("forward", json!({ "u_max": max, "u_min": min }));
    Ok(())
}

fn dtn_cmd(s: &Setup, args: &Args, c: &mut Collector) -> Result<(), CliError> {
    let op = assemble(&s.mesh, &s.lambda, &s.v1);
    let map = dtn(&op, &s.mesh.components, s.policy)?;
    let csv = map.to_csv();
    if let Some(p) = &args.dtn_out {
        c.external(p.clone(), csv.clone());
    }
    c.file("dtn.csv", csv);
    let mut report = json!({ "n": map.n, "max_asymmetry": map.max_asymmetry() });
    if s.cfg.domain == "disk" {
        // u = r^k cos kθ on any disk gives ∫ ∂_ν u cos kθ ds = kπ
        let ctr = s.cfg.center;
        let pairs: Vec<_> = (1..=3)
            .map(|k| {
                let f: Vec<f64> = s.mesh.vertices[..map.n]
                    .iter()
                    .map(|p| (k as f64 * (p[1] - ctr[1]).atan2(p[0] - ctr[0])).cos())
                    .collect();
                json!({ "k": k, "pairing": map.pairing(&f, &f), "reference": k as f64 * PI })
            })
            .collect();
        report["cos_pairings"] = json!(pairs);
    }
    c.norm("dtn", report);
    Ok(())
}

fn cgo_build(s: &Setup, args: &Args, c: &mut Collector) -> Result<(), CliError> {
    let p = match &args.point {
        Some(t) => parse_point(t)?,
        None => s.cfg.point,
    };
    let hs = match &args.h {
        Some(t) => parse_h_list(t)?,
        None => s.cfg.h_list.clone().unwrap_or_else(|| CGO_H.to_vec()),
    };
    let sign = args.sign.unwrap_or(s.cfg.sign);
    if sign != 1 && sign != -1 {
        return Err(CliError::config(format!("--sign must be +1 or -1, got {sign}")));
    }
    let (phase, a) = s.phase(p)?;
    let op = assemble(&s.mesh, &s.lambda, &s.v1);
    let ws = CgoWorkspace::new(&s.mesh, &s.domain, &s.lambda);
    let opts = s.cgo_options();
    let mut all = Vec::new();
    for &h in &hs {
        let u = assemble_cgo(&ws, &op, &s.v1, &phase, &a, h, sign, &opts)?;
        let dir = h_tag(h);
        for (name, field) in [
            ("a", &u.amplitude),
            ("r11", &u.r11),
            ("r12", &u.r12),
            ("eta", &u.eta),
            ("r2", &u.r2),
            ("trace", &u.trace),
        ] {
            c.file(format!("{dir}/{name}.csv"), field_csv(field));
        }
        c.file(format!("{dir}/norms.json"), u.norms_json() + "\n");
        all.push(u.norms);
    }
    c.norm("cgo", json!({ "point": p, "sign": sign, "norms": all }));
    Ok(())
}

fn carleman(s: &Setup, args: &Args, c: &mut Collector) -> Result<(), CliError> {
    let p = match &args.point {
        Some(t) => parse_point(t)?,
        None => s.cfg.point,
    };
    let hs = match &args.h {
        Some(t) => parse_h_list(t)?,
        None => s.cfg.h_list.clone().unwrap_or_else(|| CARLEMAN_H.to_vec()),
    };
    let zp = cz(p);
    let phase = match s.cfg.carleman_weight.as_str() {
        "cubic" => HolomorphicPhase::new(RationalFunction::polynomial(Poly::from_roots(&[zp, zp, zp])), vec![zp]),
        _ => build_phase(zp, &PhaseStyle::Quadratic, &s.domain)?,
    };
    let op = assemble(&s.mesh, &s.lambda, &s.v1);
    let opts = CarlemanOptions { trials: s.cfg.carleman_trials, seed: s.cfg.seed, policy: s.policy, ..Default::default() };
    let report = carleman_verify(&s.mesh, &op, &phase, &hs, &opts)?;
    let text = serde_json::to_string_pretty(&json!({ "weight": s.cfg.carleman_weight, "point": p, "report": report }))
        .expect("report serializes");
    c.file("carleman.json", text + "\n");
    c.norm("carleman", json!({ "max_rho": report.max_rho, "median_rho": report.median_rho, "bounded": report.bounded, "growing": report.growing }));
    Ok(())
}

fn recovery_parts(s: &Setup) -> Result<(DiscreteOperator, DiscreteOperator, Vec<f64>), CliError> {
    let op1 = assemble(&s.mesh, &s.lambda, &s.v1);
    let op2 = assemble(&s.mesh, &s.lambda, &s.v2);
    let truth: Vec<f64> = s.v1.values.iter().zip(&s.v2.values).map(|(a, b)| a - b).collect();
    Ok((op1, op2, truth))
}

fn recovery_config(s: &Setup, grid: Vec<Point>) -> RecoveryConfig {
    RecoveryConfig {
        h_list: s.cfg.h_list.clone().unwrap_or_else(|| RECOVERY_H.to_vec()),
        order: s.cfg.order,
        grid,
        margin: s.cfg.recovery_margin,
    }
}

fn reconstruct(s: &Setup, c: &mut Collector) -> Result<(), CliError> {
    let (op1, op2, truth) = recovery_parts(s)?;
    let dtn1 = dtn(&op1, &s.mesh.components, s.policy)?;
    let dtn2 = dtn(&op2, &s.mesh.components, s.policy)?;
    let ws = CgoWorkspace::new(&s.mesh, &s.domain, &s.lambda);
    let ctx = RecoveryContext {
        ws: &ws,
        op1: &op1,
        op2: &op2,
        v1: &s.v1,
        v2: &s.v2,
        dtn1: &dtn1,
        dtn2: &dtn2,
        truth: Some(&truth),
        cgo: s.cgo_options(),
    };
    let grid = square_grid(s.cfg.grid_center, s.cfg.grid_half_width, s.cfg.grid_n);
    let config = recovery_config(s, grid);
    let report = recover_grid(&ctx, &config, s.policy)?;
    c.file("reconstruction.csv", reconstruction_csv(&report));
    c.file("reconstruction.svg", reconstruction_svg(&report));
    c.file("report.json", serde_json::to_string_pretty(&report).expect("report serializes") + "\n");
    c.norm("reconstruct", json!({ "rel_l2": report.rel_l2, "rel_max": report.rel_max, "flagged": report.flagged }));
    Ok(())
}

fn convergence(s: &Setup, args: &Args, c: &mut Collector) -> Result<(), CliError> {
    let p = match &args.point {
        Some(t) => parse_point(t)?,
        None => s.cfg.point,
    };
    let (phase, a) = s.phase(p)?;
    let (op1, op2, truth) = recovery_parts(s)?;
    let ws = CgoWorkspace::new(&s.mesh, &s.domain, &s.lambda);
    let opts = s.cgo_options();
    let cgo_h = s.cfg.cgo_h_list.clone().unwrap_or_else(|| CGO_H.to_vec());
    let suite = scaling_suite(&ws, &op1, &s.v1, &phase, &a, &cgo_h, s.cfg.sign, &opts)?;
    let dtn1 = dtn(&op1, &s.mesh.components, s.policy)?;
    let dtn2 = dtn(&op2, &s.mesh.components, s.policy)?;
    let ctx = RecoveryContext {
        ws: &ws,
        op1: &op1,
        op2: &op2,
        v1: &s.v1,
        v2: &s.v2,
        dtn1: &dtn1,
        dtn2: &dtn2,
        truth: Some(&truth),
        cgo: opts,
    };
    let est = recover_point(&ctx, p, &recovery_config(s, vec![p]), s.policy)?;
    let summary = json!({ "point": p, "cgo": suite, "recovery": est });
    c.file("convergence.json", serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n");
    c.norm("slopes", suite.slopes);
    c.norm("recovery", json!({ "estimate": est.estimate, "truth": est.truth, "flags": est.flags }));
    Ok(())
}
