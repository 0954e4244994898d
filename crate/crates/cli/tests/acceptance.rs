//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion outside `KNOWN_FAIL` fails.

use calderon2d::cgo::{scaling_suite, CgoOptions, CgoWorkspace, assemble_cgo};
use calderon2d::elliptic::{
    assemble, carleman_verify, dtn, first_dirichlet_eigenvalue, Bump, CarlemanOptions, PotentialField,
};
use calderon2d::geometry::{generate_mesh, ConformalFactor, PlanarDomain, TriangleMesh};
use calderon2d::holomorphic::{build_phase, HolomorphicPhase, PhaseStyle, Poly, RationalFunction};
use calderon2d::recover::{
    alessandrini_pairing, conductivity_to_potential, oscillatory_integral, recover_grid, square_grid,
    stationary_constant, volume_pairing, RecoveryConfig, RecoveryContext,
};
use calderon2d::{Complex64, ExecPolicy};
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

// 1. forward oracles
const DTN_TARGET_H: f64 = 0.03;
const DTN_TOL: f64 = 0.02;
const EIG_TARGET_H: f64 = 0.02;
const EIG_TOL: f64 = 0.01;
const J01_SQ: f64 = 5.783_185_962_946_784;
// 3. Carleman
const CARLEMAN_H: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
const CARLEMAN_TARGET_H: f64 = 0.02;
const CARLEMAN_BUDGET_S: f64 = 300.0;
// 4. CGO slopes
const CGO_H: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
const CGO_TARGET_H: f64 = 0.02;
const SLOPE_R11: f64 = 0.85;
const SLOPE_R12: f64 = 0.9;
const SLOPE_ETA: f64 = 1.8;
const SLOPE_RESIDUAL: f64 = 0.85;
const SLOPE_R2: f64 = 1.3;
const CGO_BUDGET_S: f64 = 600.0;
// 5. Alessandrini identity
const GREEN_TARGET_H: f64 = 0.03;
const GREEN_FINE_H: f64 = 0.015;
const GREEN_CGO_H: f64 = 0.2;
const GREEN_TOL: f64 = 1e-3;
// 6. stationary phase
const STAT_H: f64 = 0.02;
const STAT_TOL: f64 = 0.01;
// 7. recovery
const REC_TARGET_H: f64 = 0.02;
const REC_H: [f64; 5] = [0.4, 0.28, 0.2, 0.14, 0.1];
const REC_HALF_WIDTH: f64 = 0.4;
const REC_CENTER_TOL: f64 = 0.20;
const REC_L2_TOL: f64 = 0.25;
const REC_BUDGET_S: f64 = 1800.0;
// 8. null test
const NULL_TARGET_H: f64 = 0.04;
const NULL_TOL: f64 = 1e-6;
// 9. conductivity
const SCALE_TOL: f64 = 1e-10;
const COND_MESHES: [f64; 3] = [0.08, 0.04, 0.02];
const COND_MIN_ORDER: f64 = 0.9;

/// Criteria known not to hold; see the decisions ledger.
const KNOWN_FAIL: [usize; 2] = [3, 4];

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn disk(h: f64) -> (PlanarDomain, TriangleMesh) {
    let d = PlanarDomain::unit_disk();
    let m = generate_mesh(&d, h).expect("mesh");
    (d, m)
}

fn default_bump(m: &TriangleMesh, d: &PlanarDomain) -> PotentialField {
    PotentialField::bumps(m, d, &[Bump { center: [0.0, 0.0], amplitude: 1.0, width: 0.2 }], 0.1)
}

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> RationalFunction {
    RationalFunction::polynomial(Poly::one())
}

fn c1_forward() -> Line {
    let (_, m) = disk(DTN_TARGET_H);
    let op = assemble(&m, &ConformalFactor::flat(&m), &PotentialField::zero(&m));
    let s = dtn(&op, &m.components, ExecPolicy::Parallel).expect("dtn");
    let mut worst: f64 = 0.0;
    let mut vals = Vec::new();
    for k in 1..=3 {
        let f: Vec<f64> = m.vertices[..s.n].iter().map(|p| (k as f64 * p[1].atan2(p[0])).cos()).collect();
        let v = s.pairing(&f, &f);
        worst = worst.max((v / (k as f64 * PI) - 1.0).abs());
        vals.push(format!("{v:.4}"));
    }
    let (_, m) = disk(EIG_TARGET_H);
    let op = assemble(&m, &ConformalFactor::flat(&m), &PotentialField::zero(&m));
    let mu = first_dirichlet_eigenvalue(&op).expect("eigenvalue");
    let eig_err = (mu / J01_SQ - 1.0).abs();
    Line {
        id: 1,
        name: "forward oracles",
        pass: worst <= DTN_TOL && eig_err <= EIG_TOL,
        detail: format!("cos pairings [{}] max rel {worst:.2e}; λ₁ {mu:.5} rel {eig_err:.2e}", vals.join(", ")),
    }
}

fn c2_conformal() -> Line {
    let (_, m) = disk(0.03);
    let v = PotentialField::zero(&m);
    let flat = assemble(&m, &ConformalFactor::flat(&m), &v);
    let lams = [
        ConformalFactor::from_fn(&m, |p| 0.7 * p[0] - 0.2),
        ConformalFactor::from_fn(&m, |p| (2.0 * p[1]).sin() * p[0]),
        ConformalFactor::from_fn(&m, |p| (1.0 + p[0] * p[0] + p[1] * p[1]).ln()),
    ];
    let same = lams.iter().filter(|l| assemble(&m, l, &v).stiffness == flat.stiffness).count();
    Line { id: 2, name: "conformal invariance", pass: same == 3, detail: format!("{same}/3 stiffness matrices bitwise equal") }
}

fn c3_carleman() -> Line {
    let t0 = Instant::now();
    let (d, m) = disk(CARLEMAN_TARGET_H);
    let op = assemble(&m, &ConformalFactor::flat(&m), &default_bump(&m, &d));
    let quad = build_phase(origin(), &PhaseStyle::Quadratic, &d).expect("phase");
    let cubic = HolomorphicPhase::new(RationalFunction::polynomial(Poly::from_roots(&[origin(); 3])), vec![origin()]);
    let opts = CarlemanOptions::default();
    let q = carleman_verify(&m, &op, &quad, &CARLEMAN_H, &opts).expect("carleman");
    let c = carleman_verify(&m, &op, &cubic, &CARLEMAN_H, &opts).expect("carleman control");
    let secs = t0.elapsed().as_secs_f64();
    let rho = |r: &calderon2d::elliptic::CarlemanReport| r.rows.iter().map(|x| format!("{:.3e}", x.rho)).collect::<Vec<_>>().join(" ");
    Line {
        id: 3,
        name: "Carleman suite",
        pass: q.bounded && c.growing && secs < CARLEMAN_BUDGET_S,
        detail: format!(
            "quadratic ρ [{}] bounded={}; cubic control ρ [{}] growing={}; {secs:.1}s",
            rho(&q),
            q.bounded,
            rho(&c),
            c.growing
        ),
    }
}

fn c4_cgo() -> Line {
    let t0 = Instant::now();
    let (d, m) = disk(CGO_TARGET_H);
    let lam = ConformalFactor::flat(&m);
    let v = default_bump(&m, &d);
    let op = assemble(&m, &lam, &v);
    let ws = CgoWorkspace::new(&m, &d, &lam);
    let phase = build_phase(origin(), &PhaseStyle::Quadratic, &d).expect("phase");
    let suite = scaling_suite(&ws, &op, &v, &phase, &one(), &CGO_H, 1, &CgoOptions::default()).expect("suite");
    let s = suite.slopes;
    let secs = t0.elapsed().as_secs_f64();
    let checks = [
        ("r11", s.r11_l2, SLOPE_R11),
        ("r12", s.r12_inf, SLOPE_R12),
        ("eta", s.eta_inf, SLOPE_ETA),
        ("residual", s.residual, SLOPE_RESIDUAL),
        ("r2", s.r2_l2, SLOPE_R2),
    ];
    let detail = checks
        .iter()
        .map(|(n, v, t)| format!("{n} {v:.2}{}{t}", if v >= t { "≥" } else { "<" }))
        .collect::<Vec<_>>()
        .join(", ");
    Line {
        id: 4,
        name: "CGO scaling slopes",
        pass: checks.iter().all(|(_, v, t)| v >= t) && secs < CGO_BUDGET_S,
        detail: format!("{detail}; {secs:.1}s"),
    }
}

fn green_rel(target_h: f64) -> f64 {
    let (d, m) = disk(target_h);
    let lam = ConformalFactor::flat(&m);
    let v1 = PotentialField::bumps(&m, &d, &[Bump { center: [0.1, 0.05], amplitude: 1.0, width: 0.2 }], 0.1);
    let v2 = PotentialField::zero(&m);
    let op1 = assemble(&m, &lam, &v1);
    let op2 = assemble(&m, &lam, &v2);
    let s1 = dtn(&op1, &m.components, ExecPolicy::Parallel).expect("dtn");
    let s2 = dtn(&op2, &m.components, ExecPolicy::Parallel).expect("dtn");
    let ws = CgoWorkspace::new(&m, &d, &lam);
    let phase = build_phase(origin(), &PhaseStyle::Quadratic, &d).expect("phase");
    let opts = CgoOptions::default();
    let u1 = assemble_cgo(&ws, &op1, &v1, &phase, &one(), GREEN_CGO_H, 1, &opts).expect("cgo");
    let u2 = assemble_cgo(&ws, &op2, &v2, &phase, &one(), GREEN_CGO_H, -1, &opts).expect("cgo");
    let lhs = alessandrini_pairing(&s1, &s2, &u1, &u2).expect("pairing");
    let rhs = volume_pairing(&m, &lam, &u1, &u2, &v1.values);
    (lhs - rhs).norm() / rhs.norm()
}

fn c5_alessandrini() -> Line {
    let coarse = green_rel(GREEN_TARGET_H);
    let fine = green_rel(GREEN_FINE_H);
    Line {
        id: 5,
        name: "Alessandrini identity",
        pass: coarse <= GREEN_TOL && fine < coarse,
        detail: format!("rel diff {coarse:.2e} at {GREEN_TARGET_H}, {fine:.2e} at {GREEN_FINE_H}"),
    }
}

fn c6_stationary() -> Line {
    // Gaussian window σ = 0.3; the closed form is frozen as π|a|²e^{2λ}/|Φ''| = π here
    let p = Complex64::new(0.1, -0.05);
    let phase = build_phase(p, &PhaseStyle::Quadratic, &PlanarDomain::unit_disk()).expect("phase");
    let st = stationary_constant(&phase, p, 0.0, &one()).expect("constant");
    let w = |r: [f64; 2]| (-((r[0] - p.re).powi(2) + (r[1] - p.im).powi(2)) / (2.0 * 0.09)).exp();
    let v = oscillatory_integral(&phase, STAT_H, w, [p.re - 1.5, p.re + 1.5, p.im - 1.5, p.im + 1.5], 120, 8);
    let coef = v / STAT_H;
    let rel = (coef - st.constant).norm() / st.constant;
    Line {
        id: 6,
        name: "stationary-phase constant",
        pass: (st.constant - PI).abs() < 1e-14 && rel <= STAT_TOL,
        detail: format!("integrated {:.5}{:+.1e}i vs closed form {:.5}, rel {rel:.2e}", coef.re, coef.im, st.constant),
    }
}

fn c7_recovery() -> Line {
    let t0 = Instant::now();
    let (d, m) = disk(REC_TARGET_H);
    let lam = ConformalFactor::flat(&m);
    let v1 = default_bump(&m, &d);
    let v2 = PotentialField::zero(&m);
    let op1 = assemble(&m, &lam, &v1);
    let op2 = assemble(&m, &lam, &v2);
    let s1 = dtn(&op1, &m.components, ExecPolicy::Parallel).expect("dtn");
    let s2 = dtn(&op2, &m.components, ExecPolicy::Parallel).expect("dtn");
    let ws = CgoWorkspace::new(&m, &d, &lam);
    let ctx = RecoveryContext {
        ws: &ws,
        op1: &op1,
        op2: &op2,
        v1: &v1,
        v2: &v2,
        dtn1: &s1,
        dtn2: &s2,
        truth: Some(&v1.values),
        cgo: CgoOptions::default(),
    };
    let cfg = RecoveryConfig { h_list: REC_H.to_vec(), order: 1, grid: square_grid([0.0, 0.0], REC_HALF_WIDTH, 5), margin: 0.1 };
    let g = recover_grid(&ctx, &cfg, ExecPolicy::Parallel).expect("grid");
    let secs = t0.elapsed().as_secs_f64();
    let center = &g.points[12];
    let truth = center.truth.expect("truth");
    let cerr = (center.estimate - truth).abs() / truth.abs();
    let l2 = g.rel_l2.expect("rel l2");
    Line {
        id: 7,
        name: "end-to-end recovery",
        pass: cerr <= REC_CENTER_TOL && l2 <= REC_L2_TOL && secs < REC_BUDGET_S,
        detail: format!("center {:.4} (rel {cerr:.3}), grid rel L2 {l2:.4}, {secs:.1}s", center.estimate),
    }
}

fn c8_null() -> Line {
    let (d, m) = disk(NULL_TARGET_H);
    let lam = ConformalFactor::flat(&m);
    let v = default_bump(&m, &d);
    let op1 = assemble(&m, &lam, &v);
    let op2 = assemble(&m, &lam, &v);
    let s1 = dtn(&op1, &m.components, ExecPolicy::Parallel).expect("dtn");
    let s2 = dtn(&op2, &m.components, ExecPolicy::Parallel).expect("dtn");
    let ws = CgoWorkspace::new(&m, &d, &lam);
    let zero = vec![0.0; m.n_nodes()];
    let ctx = RecoveryContext {
        ws: &ws,
        op1: &op1,
        op2: &op2,
        v1: &v,
        v2: &v,
        dtn1: &s1,
        dtn2: &s2,
        truth: Some(&zero),
        cgo: CgoOptions::default(),
    };
    let cfg = RecoveryConfig { h_list: REC_H.to_vec(), order: 1, grid: square_grid([0.0, 0.0], REC_HALF_WIDTH, 5), margin: 0.1 };
    let g = recover_grid(&ctx, &cfg, ExecPolicy::Parallel).expect("grid");
    let worst = g.points.iter().map(|p| p.estimate.abs()).fold(0.0, f64::max);
    Line { id: 8, name: "null test", pass: worst <= NULL_TOL, detail: format!("max |estimate| {worst:.2e} over 25 points") }
}

/// `γ = (1 + s)²` with `s = sin(2x) cos(y) / 2`, so `V = Δ√γ / √γ = -5s / (1 + s)`.
fn gamma_fn(p: [f64; 2]) -> f64 {
    (1.0 + 0.5 * (2.0 * p[0]).sin() * p[1].cos()).powi(2)
}

fn potential_fn(p: [f64; 2]) -> f64 {
    let s = 0.5 * (2.0 * p[0]).sin() * p[1].cos();
    -5.0 * s / (1.0 + s)
}

fn c9_conductivity() -> Line {
    let (_, m) = disk(0.04);
    let op = assemble(&m, &ConformalFactor::from_fn(&m, |p| 0.3 * p[0]), &PotentialField::zero(&m));
    let gamma = m.nodal(gamma_fn);
    let v = conductivity_to_potential(&gamma, &op).expect("potential");
    let mut scale_err: f64 = 0.0;
    for c in [1e-4, 3.0, 2.5e5] {
        let g: Vec<f64> = gamma.iter().map(|x| x * c).collect();
        let w = conductivity_to_potential(&g, &op).expect("potential");
        for (a, b) in v.values.iter().zip(&w.values) {
            scale_err = scale_err.max((a - b).abs());
        }
    }
    let mut hs = Vec::new();
    let mut errs = Vec::new();
    for th in COND_MESHES {
        let (d, m) = disk(th);
        let op = assemble(&m, &ConformalFactor::flat(&m), &PotentialField::zero(&m));
        let gamma = m.nodal(gamma_fn);
        let v = conductivity_to_potential(&gamma, &op).expect("potential");
        let mut e: f64 = 0.0;
        for (i, p) in m.vertices.iter().enumerate() {
            if d.distance_to_boundary(*p) > 0.2 {
                e = e.max((v.values[i] - potential_fn(*p)).abs());
            }
        }
        hs.push(m.h_mesh);
        errs.push(e);
    }
    let order = calderon2d::cgo::loglog_slope(&hs, &errs);
    Line {
        id: 9,
        name: "conductivity reduction",
        pass: scale_err <= SCALE_TOL && order >= COND_MIN_ORDER,
        detail: format!(
            "scale err {scale_err:.1e}; manufactured max err {}, order {order:.2}",
            errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn run_cli(cmd: &str, cfg: &Path, out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_calderon2d"))
        .args([cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "7"])
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).expect("read dir") {
            let p = e.expect("entry").path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "csv") {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn c10_determinism() -> Line {
    let tmp = tempfile::tempdir().expect("tempdir");
    let cfg = tmp.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "domain = \"disk\"\ntarget_h = 0.06\nv1_bumps = [[0.0, 0.0, 0.2, 1.0]]\nh_list = [0.4, 0.2]\ngrid_n = 3\n",
    )
    .unwrap();
    let mut ok = true;
    let mut n = 0;
    for cmd in ["dtn", "cgo-build", "reconstruct"] {
        let a = tmp.path().join(format!("{cmd}-a"));
        let b = tmp.path().join(format!("{cmd}-b"));
        ok &= run_cli(cmd, &cfg, &a) && run_cli(cmd, &cfg, &b);
        let (fa, fb) = (csv_files(&a), csv_files(&b));
        n += fa.len();
        ok &= !fa.is_empty() && fa == fb;
    }
    Line { id: 10, name: "determinism", pass: ok, detail: format!("{n} CSV files compared byte for byte") }
}

fn main() {
    let t0 = Instant::now();
    let lines = vec![
        c1_forward(),
        c2_conformal(),
        c3_carleman(),
        c4_cgo(),
        c5_alessandrini(),
        c6_stationary(),
        c7_recovery(),
        c8_null(),
        c9_conductivity(),
        c10_determinism(),
    ];
    let mut unexpected = Vec::new();
    for l in &lines {
        let known = KNOWN_FAIL.contains(&l.id);
        let tag = match (l.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] {:>2}. {}: {}", l.id, l.name, l.detail);
        if !l.pass && !known {
            unexpected.push(l.id);
        }
    }
    println!("acceptance finished in {:.1}s", t0.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
