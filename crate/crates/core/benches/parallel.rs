use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use elliptica::elliptic::{count_degree, LatticeSumPolicy, SymmetricWp};
use elliptica::field::{
    build_field_data, embedding_probe, mesh_fundamental_domain, replicate, translation_periods, FieldConfig,
};
use elliptica::{Complex64, Execution, Lattice};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn mesh(c: &mut Criterion) {
    let cfg = FieldConfig { mesh_nu: 48, mesh_nv: 48, ..FieldConfig::default() };
    let data = build_field_data(&cfg).unwrap();
    let mut group = c.benchmark_group("mesh_fundamental_domain_48");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| mesh_fundamental_domain(&data, &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn degree(c: &mut Criterion) {
    let wp = SymmetricWp::build(Lattice::square(), LatticeSumPolicy::default()).unwrap();
    let mut group = c.benchmark_group("count_degree_grid_24");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| count_degree(&wp, Complex64::new(0.4, 0.9), 24, exec).unwrap())
        });
    }
    group.finish();
}

fn probe(c: &mut Criterion) {
    let cfg = FieldConfig { mesh_nu: 24, mesh_nv: 24, end_cutoff: 2.0, ..FieldConfig::default() };
    let data = build_field_data(&cfg).unwrap();
    let t = translation_periods(&data, &cfg).unwrap();
    let block = replicate(&mesh_fundamental_domain(&data, &cfg, Execution::Parallel).unwrap(), &data, &t, (1, 1))
        .unwrap();
    let mut group = c.benchmark_group("embedding_probe_2x2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| embedding_probe(&block, 0.05 * t.lambda, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, mesh, degree, probe);
criterion_main!(benches);
