use calderon2d::cgo::CauchyIntegrator;
use calderon2d::elliptic::{assemble, dtn, PotentialField};
use calderon2d::geometry::{generate_mesh, ConformalFactor, PlanarDomain};
use calderon2d::{Complex64, ExecPolicy};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const POLICIES: [(&str, ExecPolicy); 2] = [("sequential", ExecPolicy::Sequential), ("parallel", ExecPolicy::Parallel)];

fn bench_dtn(c: &mut Criterion) {
    let d = PlanarDomain::unit_disk();
    let mut group = c.benchmark_group("dtn");
    group.sample_size(10);
    for h in [0.08, 0.05] {
        let m = generate_mesh(&d, h).unwrap();
        let op = assemble(&m, &ConformalFactor::flat(&m), &PotentialField::constant(&m, 1.0));
        op.interior_factor().unwrap();
        for (name, policy) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, m.n_nodes()), &policy, |b, &p| {
                b.iter(|| dtn(black_box(&op), &m.components, p).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_cauchy(c: &mut Criterion) {
    let d = PlanarDomain::unit_disk();
    let m = generate_mesh(&d, 0.04).unwrap();
    let ci = CauchyIntegrator::new(&m);
    let f = m.nodal(|p| {
        let r2 = p[0] * p[0] + p[1] * p[1];
        if r2 < 0.09 {
            Complex64::new(1.0 - r2 / 0.09, p[0])
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let pts: Vec<[f64; 2]> = m.vertices.iter().copied().filter(|p| p[0].hypot(p[1]) < 0.5).collect();
    let mut group = c.benchmark_group("cauchy_transform");
    group.sample_size(10);
    for (name, policy) in POLICIES {
        group.bench_function(name, |b| b.iter(|| ci.cauchy_transform(black_box(&f), &pts, policy)));
    }
    group.finish();
}

criterion_group!(benches, bench_dtn, bench_cauchy);
criterion_main!(benches);
