use calderon2d::geometry::*;
use calderon2d::holomorphic::*;
use calderon2d::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b))
}

#[test]
fn rational_derivative_matches_difference_quotient() {
    let d = PlanarDomain::unit_disk();
    let div = Divisor { entries: vec![(c(0.2, 0.1), 2), (c(-0.3, 0.0), 1)] };
    let f = meromorphic_with_divisor(&div, c(2.0, 0.5), &d).unwrap();
    let df = f.derivative();
    let z = c(0.1, -0.4);
    let e = 1e-6;
    let fd = (f.eval(z + e) - f.eval(z - e)) / (2.0 * e);
    assert!((fd - df.eval(z)).norm() < 1e-7);
}

#[test]
fn divisor_zeros_and_poles() {
    let d = PlanarDomain::unit_disk();
    let div = Divisor { entries: vec![(c(0.2, 0.1), 2), (c(-0.3, 0.0), 1)] };
    assert_eq!(div.degree(), 3);
    let f = meromorphic_with_divisor(&div, c(2.0, 0.0), &d).unwrap();
    assert!(f.eval(c(0.2, 0.1)).norm() < 1e-14);
    assert!(f.eval(c(-0.3, 0.0)).norm() < 1e-14);
    let m = generate_mesh(&d, 0.1).unwrap();
    assert_eq!(argument_principle_count(&f, &m), Some(3));
    // pole inside the closed domain is refused
    assert!(meromorphic_with_divisor(&div, c(0.5, 0.0), &d).is_err());
}

#[test]
fn negative_multiplicities_are_poles() {
    let d = PlanarDomain::unit_disk();
    let div = Divisor { entries: vec![(c(0.0, 0.0), 1), (c(0.4, 0.0), -1)] };
    let f = meromorphic_with_divisor(&div, c(3.0, 0.0), &d).unwrap();
    assert!(!f.is_polynomial());
    let m = generate_mesh(&d, 0.1).unwrap();
    // zeros minus poles
    assert_eq!(argument_principle_count(&f, &m), Some(0));
}

#[test]
fn rational_json_round_trip() {
    let f = RationalFunction { num: Poly::new(vec![c(1.0, 2.0), c(0.0, -1.0)]), den: Poly::from_roots(&[c(3.0, 0.0)]) };
    let back = RationalFunction::from_json(&f.to_json()).unwrap();
    assert_eq!(back, f);
    assert!(RationalFunction::from_json("{").is_err());
}

#[test]
fn quadratic_phase_has_a_single_nondegenerate_critical_point() {
    let d = PlanarDomain::unit_disk();
    let m = generate_mesh(&d, 0.08).unwrap();
    let p = c(0.2, -0.1);
    let phase = build_phase(p, &PhaseStyle::Quadratic, &d).unwrap();
    assert!(phase.d1(p).norm() < 1e-15);
    assert!((phase.d2(p) - 1.0).norm() < 1e-15);
    let r = morse_check(&phase, &d, &m);
    assert!(r.passes, "{:?}", r.diagnostics);
    assert_eq!(r.argument_count, Some(1));
    assert_eq!(r.critical_points.len(), 1);
}

#[test]
fn prescribed_critical_points() {
    let d = PlanarDomain::unit_disk();
    let m = generate_mesh(&d, 0.08).unwrap();
    let extra = vec![c(0.5, 0.0), c(-0.3, 0.4)];
    let phase = build_phase(c(0.0, 0.0), &PhaseStyle::Prescribed(extra.clone()), &d).unwrap();
    for z in std::iter::once(c(0.0, 0.0)).chain(extra) {
        assert!(phase.d1(z).norm() < 1e-14);
    }
    let r = morse_check(&phase, &d, &m);
    assert!(r.passes, "{:?}", r.diagnostics);
    assert_eq!(r.argument_count, Some(3));
}

#[test]
fn degenerate_and_boundary_critical_points_fail() {
    let d = PlanarDomain::unit_disk();
    let m = generate_mesh(&d, 0.08).unwrap();
    let cubic = HolomorphicPhase::new(RationalFunction::polynomial(Poly::from_roots(&[c(0.0, 0.0); 3])), vec![c(0.0, 0.0)]);
    assert!(!morse_check(&cubic, &d, &m).passes);
    assert!(build_phase(c(0.99, 0.0), &PhaseStyle::Quadratic, &d).is_err());
    assert!(build_phase(c(0.0, 0.0), &PhaseStyle::Prescribed(vec![c(0.01, 0.0)]), &d).is_err());
}

#[test]
fn amplitude_is_one_at_p_and_zero_elsewhere() {
    let d = PlanarDomain::unit_disk();
    let p = c(0.1, 0.1);
    let others = vec![c(-0.4, 0.0), c(0.3, -0.5)];
    let phase = build_phase(p, &PhaseStyle::Prescribed(others.clone()), &d).unwrap();
    let a = amplitude_build(&phase, p).unwrap();
    assert!((a.eval(p) - 1.0).norm() < 1e-14);
    for q in others {
        assert!(a.eval(q).norm() < 1e-14);
    }
    assert!(amplitude_build(&phase, c(0.7, 0.7)).is_err());
}

#[test]
fn negated_and_scaled_phases() {
    let d = PlanarDomain::unit_disk();
    let phase = build_phase(c(0.0, 0.0), &PhaseStyle::Quadratic, &d).unwrap();
    let z = c(0.3, 0.4);
    assert_eq!(phase.negated().value(z), -phase.value(z));
    assert!((phase.scaled(3.0).value(z) - 3.0 * phase.value(z)).norm() < 1e-15);
}

#[test]
fn period_of_log_modulus_around_the_hole() {
    let d = PlanarDomain::annulus(0.3, 1.0).unwrap();
    let m = generate_mesh(&d, 0.04).unwrap();
    let loops = homology_basis(&d, &m).unwrap();
    let u = m.nodal(|p| p[0].hypot(p[1]).ln());
    let rec = GradientRecovery::new(&m);
    let loc = Locator::new(&m);
    // ∂ log|z| = 1/(2z), so the normalized period is one
    let per = period_functional(&m, &u, &loops, &rec, &loc).unwrap();
    assert!((per[0] - 1.0).norm() < 1e-2, "{per:?}");
    // single-valued harmonic parts have zero period
    let v = m.nodal(|p| p[0] * p[0] - p[1] * p[1]);
    let per = period_functional(&m, &v, &loops, &rec, &loc).unwrap();
    assert!(per[0].norm() < 1e-2, "{per:?}");
}

#[test]
fn omega_correction_interpolates() {
    let t = [(c(0.0, 0.0), c(1.0, 0.0)), (c(0.5, 0.0), c(0.0, 2.0)), (c(0.0, 0.5), c(-1.0, -1.0))];
    let w = omega_correction(&t);
    for (z, v) in t {
        assert!((w.eval(z) - v).norm() < 1e-13);
    }
}

proptest! {
    #[test]
    fn product_rule(a in prop::collection::vec(cplx(), 1..5), b in prop::collection::vec(cplx(), 1..5), z in cplx()) {
        let p = Poly::new(a);
        let q = Poly::new(b);
        let lhs = p.mul(&q).derivative().eval(z);
        let rhs = p.derivative().eval(z) * q.eval(z) + p.eval(z) * q.derivative().eval(z);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn antiderivative_inverts_derivative(a in prop::collection::vec(cplx(), 1..6), z in cplx()) {
        let p = Poly::new(a);
        prop_assert!((p.antiderivative().derivative().eval(z) - p.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn interpolation_hits_the_nodes(vals in prop::collection::vec(cplx(), 1..5)) {
        let data: Vec<(Complex64, Complex64)> =
            vals.iter().enumerate().map(|(k, v)| (c(0.3 * k as f64 - 0.5, 0.1 * k as f64), *v)).collect();
        let p = Poly::interpolate(&data);
        for (z, v) in data {
            prop_assert!((p.eval(z) - v).norm() < 1e-10);
        }
    }

    #[test]
    fn from_roots_vanishes_on_its_roots(r in prop::collection::vec(cplx(), 1..5)) {
        let p = Poly::from_roots(&r);
        prop_assert_eq!(p.degree(), r.len());
        for z in r {
            prop_assert!(p.eval(z).norm() < 1e-12);
        }
    }
}
