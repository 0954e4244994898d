use calderon2d::cgo::*;
use calderon2d::elliptic::{assemble, Bump, PotentialField};
use calderon2d::geometry::*;
use calderon2d::holomorphic::{build_phase, cz, PhaseStyle, Poly, RationalFunction};
use calderon2d::{Complex64, ExecPolicy};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn disk(h: f64) -> (PlanarDomain, TriangleMesh) {
    let d = PlanarDomain::unit_disk();
    let m = generate_mesh(&d, h).unwrap();
    (d, m)
}

/// Midpoint rule on a uniform `n²` subdivision of the triangle.
fn brute_kernel(t: [Point; 3], vals: [Complex64; 3], z: Complex64, n: usize) -> Complex64 {
    let area = 0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]));
    let mut acc = c(0.0, 0.0);
    let nf = n as f64;
    for i in 0..n {
        for j in 0..n - i {
            let mut cells = vec![[(i as f64 + 1.0 / 3.0) / nf, (j as f64 + 1.0 / 3.0) / nf]];
            if i + j + 1 < n {
                cells.push([(i as f64 + 2.0 / 3.0) / nf, (j as f64 + 2.0 / 3.0) / nf]);
            }
            for [s, r] in cells {
                let l = [1.0 - s - r, s, r];
                let x = l[0] * t[0][0] + l[1] * t[1][0] + l[2] * t[2][0];
                let y = l[0] * t[0][1] + l[1] * t[1][1] + l[2] * t[2][1];
                let f = vals[0] * l[0] + vals[1] * l[1] + vals[2] * l[2];
                acc += f / (z - c(x, y)) * (area / (nf * nf));
            }
        }
    }
    acc
}

fn p1_grads(t: [Point; 3]) -> [[f64; 2]; 3] {
    let det = (t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]);
    std::array::from_fn(|k| {
        let a = t[(k + 1) % 3];
        let b = t[(k + 2) % 3];
        [(a[1] - b[1]) / det, (b[0] - a[0]) / det]
    })
}

#[test]
fn exact_triangle_kernel_matches_brute_force() {
    let t = [[0.0, 0.0], [0.3, 0.05], [0.1, 0.25]];
    let vals = [c(1.0, 0.5), c(-0.5, 2.0), c(0.3, -1.0)];
    let g = p1_grads(t);
    for z in [c(0.8, -0.3), c(0.45, 0.2), c(-0.2, 0.1)] {
        let exact = triangle_kernel_exact(t, vals, g, z);
        let brute = brute_kernel(t, vals, z, 400);
        assert!((exact - brute).norm() < 1e-6 * brute.norm().max(1.0), "{z}: {exact} vs {brute}");
    }
    // weakly singular point inside the triangle
    let z = c(0.12, 0.08);
    let exact = triangle_kernel_exact(t, vals, g, z);
    let brute = brute_kernel(t, vals, z, 1200);
    assert!((exact - brute).norm() < 2e-3 * brute.norm(), "{exact} vs {brute}");
}

#[test]
fn area_kernel_of_the_indicator_of_the_disk() {
    // ∫_{|ξ|<1} dA / (z - ξ) = π z̄ inside, π / z outside
    let (_, m) = disk(0.04);
    let ci = CauchyIntegrator::new(&m);
    let one = vec![c(1.0, 0.0); m.n_nodes()];
    let pts = [[0.0, 0.0], [0.3, -0.2], [-0.5, 0.4], [1.6, 0.3]];
    let v = ci.area_kernel(&one, &pts, ExecPolicy::Sequential);
    for (p, val) in pts.iter().zip(&v) {
        let z = cz(*p);
        let want = if z.norm() < 1.0 { PI * z.conj() } else { PI / z };
        assert!((val - want).norm() < 5e-3, "{p:?}: {val} vs {want}");
    }
}

#[test]
fn cauchy_transform_is_a_fixed_multiple_of_the_area_kernel() {
    let (_, m) = disk(0.1);
    let ci = CauchyIntegrator::new(&m);
    let f = m.nodal(|p| c(p[0] * p[1], p[0] - 0.2));
    let pts = [[0.1, 0.1], [0.5, -0.3]];
    let a = ci.area_kernel(&f, &pts, ExecPolicy::Sequential);
    let r = ci.cauchy_transform(&f, &pts, ExecPolicy::Sequential);
    for (x, y) in a.iter().zip(&r) {
        assert!((x * c(0.0, -2.0) - y).norm() < 1e-14);
    }
}

#[test]
fn d_inverse_undoes_the_holomorphic_derivative() {
    // g = (1 - 4|z|²)³ on |z| < 1/2, compactly supported and C²
    let (_, m) = disk(0.03);
    let ci = CauchyIntegrator::new(&m);
    let g = |z: Complex64| {
        let s = 1.0 - 4.0 * z.norm_sqr();
        if s > 0.0 {
            s * s * s
        } else {
            0.0
        }
    };
    let dg = m.nodal(|p| {
        let z = cz(p);
        let s = 1.0 - 4.0 * z.norm_sqr();
        // ∂|z|² = z̄
        if s > 0.0 {
            z.conj() * (-12.0 * s * s)
        } else {
            c(0.0, 0.0)
        }
    });
    let pts = [[0.0, 0.0], [0.2, 0.1], [-0.1, -0.3], [0.7, 0.0]];
    let t = ci.d_inverse(&dg, &pts, ExecPolicy::Parallel);
    for (p, v) in pts.iter().zip(&t) {
        assert!((v - g(cz(*p))).norm() < 1e-2, "{p:?}: {v}");
    }
}

#[test]
fn cutoff_profiles() {
    let cut = CutoffPair::new(c(0.1, 0.0), 0.2, 0.4).unwrap();
    assert_eq!(cut.chi1(c(0.25, 0.0)), 1.0);
    assert_eq!(cut.chi1(c(0.1, 0.31)), 0.0);
    assert_eq!(cut.chi(c(0.1, 0.29)), 1.0);
    assert_eq!(cut.chi(c(0.55, 0.0)), 0.0);
    // ∂χ against central differences
    let z = c(0.1 + 0.24, 0.2);
    let e = 1e-6;
    let dx = (cut.chi(z + e) - cut.chi(z - e)) / (2.0 * e);
    let dy = (cut.chi(z + c(0.0, e)) - cut.chi(z - c(0.0, e))) / (2.0 * e);
    assert!((cut.dchi(z) - c(dx, -dy) * 0.5).norm() < 1e-7);
    assert!(CutoffPair::new(c(0.0, 0.0), 0.3, 0.2).is_err());
}

#[test]
fn default_cutoffs_respect_the_boundary() {
    let d = PlanarDomain::unit_disk();
    let phase = build_phase(c(0.4, 0.0), &PhaseStyle::Quadratic, &d).unwrap();
    let cuts = default_cutoffs(&phase, &d).unwrap();
    assert_eq!(cuts.len(), 1);
    assert!((cuts[0].rho2 - 0.3 * 0.6).abs() < 1e-12);
    assert!((cuts[0].rho1 - 0.15 * 0.6).abs() < 1e-12);
}

#[test]
fn manufactured_right_hand_side() {
    // V = 4, a = 1: G(aV) = 1 - |z|², ∂G(aV) = -z̄, so b = conj(z - p)
    let (d, m) = disk(0.04);
    let lam = ConformalFactor::flat(&m);
    let op0 = assemble(&m, &lam, &PotentialField::zero(&m));
    let p = c(0.2, -0.1);
    let phase = build_phase(p, &PhaseStyle::Quadratic, &d).unwrap();
    let rec = GradientRecovery::new(&m);
    let loc = Locator::new(&m);
    let a = vec![c(1.0, 0.0); m.n_nodes()];
    let (b, omega) = build_rhs_oneform(&op0, &m, &rec, &loc, &a, &PotentialField::constant(&m, 4.0), &phase).unwrap();
    assert!((omega.eval(p) + p.conj()).norm() < 1e-2);
    let mut worst: f64 = 0.0;
    for (i, v) in m.vertices.iter().enumerate() {
        if d.distance_to_boundary(*v) > 0.1 {
            worst = worst.max((b[i] - (cz(*v) - p).conj()).norm());
        }
    }
    assert!(worst < 1e-2, "{worst}");
    assert!(loc.interpolate(&m, &b, [p.re, p.im]).unwrap().norm() < 1e-12);
}

struct Fixture {
    domain: PlanarDomain,
    mesh: TriangleMesh,
    lambda: ConformalFactor,
}

fn fixture(h: f64) -> Fixture {
    let (domain, mesh) = disk(h);
    let lambda = ConformalFactor::from_fn(&mesh, |p| 0.1 * p[0]);
    Fixture { domain, mesh, lambda }
}

fn quadratic(d: &PlanarDomain, p: Complex64) -> (calderon2d::holomorphic::HolomorphicPhase, RationalFunction) {
    (build_phase(p, &PhaseStyle::Quadratic, d).unwrap(), RationalFunction::polynomial(Poly::one()))
}

#[test]
fn zero_potential_gives_zero_first_corrections() {
    let f = fixture(0.06);
    let ws = CgoWorkspace::new(&f.mesh, &f.domain, &f.lambda);
    let v = PotentialField::zero(&f.mesh);
    let op = assemble(&f.mesh, &f.lambda, &v);
    let (phase, a) = quadratic(&f.domain, c(0.0, 0.0));
    let u = assemble_cgo(&ws, &op, &v, &phase, &a, 0.1, 1, &CgoOptions::default()).unwrap();
    let zero = c(0.0, 0.0);
    assert!(u.b.iter().chain(&u.r11).chain(&u.r12).chain(&u.eta).all(|v| *v == zero));
    assert_eq!(u.norms.r11_l2, 0.0);
    assert!(u.norms.residual_after < 1e-8);
    // r₂ only absorbs the P1 defect of e^{Φ/h}
    assert!(u.norms.r2_l2 < 0.1, "{}", u.norms.r2_l2);
}

#[test]
fn bump_cgo_invariants() {
    let f = fixture(0.05);
    let ws = CgoWorkspace::new(&f.mesh, &f.domain, &f.lambda);
    let v = PotentialField::bumps(&f.mesh, &f.domain, &[Bump { center: [0.1, 0.0], amplitude: 2.0, width: 0.2 }], 0.1);
    let op = assemble(&f.mesh, &f.lambda, &v);
    let p = c(0.05, 0.1);
    let (phase, a) = quadratic(&f.domain, p);
    let h = 0.2;
    let cuts = default_cutoffs(&phase, &f.domain).unwrap();
    let u = assemble_cgo(&ws, &op, &v, &phase, &a, h, 1, &CgoOptions::default()).unwrap();

    assert!(ws.locator.interpolate(&f.mesh, &u.b, [p.re, p.im]).unwrap().norm() < 1e-12);
    for (i, q) in f.mesh.vertices.iter().enumerate() {
        let z = cz(*q);
        if (z - p).norm() > cuts[0].rho2 + 1e-12 {
            assert_eq!(u.r11[i], c(0.0, 0.0));
            assert_eq!(u.eta[i], c(0.0, 0.0));
        }
        let chi1 = cuts[0].chi1(z);
        let lhs = phase.d1(z) * u.r12[i];
        let rhs = (-u.eta[i] + u.b[i] * (1.0 - chi1)) * h;
        assert!((lhs - rhs).norm() < 1e-12);
    }
    assert!(u.norms.residual_after < 1e-8, "{:?}", u.norms);
    assert!(u.norms.r11_l2 > 0.0 && u.norms.r12_inf > 0.0);
    assert_eq!(u.trace.len(), f.mesh.n_boundary);

    let neg = assemble_cgo(&ws, &op, &v, &phase, &a, h, -1, &CgoOptions::default()).unwrap();
    assert_eq!(neg.phase.value(c(0.3, 0.2)), -phase.value(c(0.3, 0.2)));
    assert!(neg.norms.residual_after < 1e-8);
    assert!(assemble_cgo(&ws, &op, &v, &phase, &a, h, 0, &CgoOptions::default()).is_err());
}

#[test]
fn cgo_is_an_exact_discrete_solution() {
    let f = fixture(0.06);
    let ws = CgoWorkspace::new(&f.mesh, &f.domain, &f.lambda);
    let v = PotentialField::bumps(&f.mesh, &f.domain, &[Bump { center: [0.0, 0.0], amplitude: 1.0, width: 0.2 }], 0.1);
    let op = assemble(&f.mesh, &f.lambda, &v);
    let (phase, a) = quadratic(&f.domain, c(0.0, 0.0));
    let u = assemble_cgo(&ws, &op, &v, &phase, &a, 0.2, 1, &CgoOptions::default()).unwrap();
    let nodal = u.nodal_u(&f.mesh);
    let ku = op.system.mul_vec(&nodal);
    let scale = nodal.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let worst = ku[f.mesh.n_boundary..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(worst < 1e-9 * scale, "{worst} vs {scale}");
    assert_eq!(&ku[..f.mesh.n_boundary], &u.normal[..]);
}

#[test]
fn routes_agree_and_policies_are_bitwise_equal() {
    let f = fixture(0.06);
    let ws = CgoWorkspace::new(&f.mesh, &f.domain, &f.lambda);
    let v = PotentialField::bumps(&f.mesh, &f.domain, &[Bump { center: [0.0, 0.1], amplitude: 1.0, width: 0.2 }], 0.1);
    let op = assemble(&f.mesh, &f.lambda, &v);
    let (phase, a) = quadratic(&f.domain, c(0.0, 0.0));
    let seq = CgoOptions { policy: ExecPolicy::Sequential, ..CgoOptions::default() };
    let par = CgoOptions { policy: ExecPolicy::Parallel, ..CgoOptions::default() };
    let x = assemble_cgo(&ws, &op, &v, &phase, &a, 0.2, 1, &seq).unwrap();
    let y = assemble_cgo(&ws, &op, &v, &phase, &a, 0.2, 1, &par).unwrap();
    assert_eq!(field_csv(&x.r2), field_csv(&y.r2));
    let amp = CgoOptions { route: R2Route::Amplitude, ..CgoOptions::default() };
    let z = assemble_cgo(&ws, &op, &v, &phase, &a, 0.2, 1, &amp).unwrap();
    assert_eq!(z.r11, x.r11);
    assert!((z.norms.r2_l2 - x.norms.r2_l2).abs() < 0.2 * x.norms.r2_l2, "{} vs {}", z.norms.r2_l2, x.norms.r2_l2);
}

#[test]
fn overflowing_h_is_a_guard() {
    let f = fixture(0.1);
    let ws = CgoWorkspace::new(&f.mesh, &f.domain, &f.lambda);
    let v = PotentialField::zero(&f.mesh);
    let op = assemble(&f.mesh, &f.lambda, &v);
    let (phase, a) = quadratic(&f.domain, c(0.0, 0.0));
    let err = assemble_cgo(&ws, &op, &v, &phase, &a, 1e-5, 1, &CgoOptions::default()).unwrap_err();
    assert_eq!(err.class(), calderon2d::ErrorClass::Guard);
}

#[test]
fn field_csv_format() {
    let s = field_csv(&[c(1.0, -0.5)]);
    assert_eq!(s, "idx,re,im\n0,1.00000000000000000e0,-5.00000000000000000e-1\n");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn slope_of_a_power_law(k in -3.0..3.0f64, c0 in 0.1..10.0f64) {
        let h = [0.4, 0.2, 0.1, 0.05];
        let v: Vec<f64> = h.iter().map(|x: &f64| c0 * x.powf(k)).collect();
        prop_assert!((loglog_slope(&h, &v) - k).abs() < 1e-10);
    }

    #[test]
    fn area_kernel_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let m = generate_mesh(&PlanarDomain::unit_disk(), 0.2).unwrap();
        let ci = CauchyIntegrator::new(&m);
        let f = m.nodal(|p| c(p[0], 0.0));
        let g = m.nodal(|p| c(0.0, p[1] * p[1]));
        let fg: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| x * a + y * b).collect();
        let pts = [[0.1, 0.2], [0.9, -0.3]];
        let kf = ci.area_kernel(&f, &pts, ExecPolicy::Sequential);
        let kg = ci.area_kernel(&g, &pts, ExecPolicy::Sequential);
        let k = ci.area_kernel(&fg, &pts, ExecPolicy::Sequential);
        for i in 0..2 {
            prop_assert!((k[i] - kf[i] * a - kg[i] * b).norm() < 1e-12);
        }
    }
}
