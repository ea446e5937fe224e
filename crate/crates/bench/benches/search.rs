use criterion::{criterion_group, criterion_main, Criterion};
use lemnikit::{exhaustive_search, local_search, wagner_coefficients, RootConfiguration, SamplerConfig, SearchSpace, WagnerParams};

fn search(c: &mut Criterion) {
    let cfg = SamplerConfig::triangular(5_000, 1, 1).unwrap();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("exhaustive_n4_m12", |b| {
        b.iter(|| exhaustive_search(&SearchSpace::symmetric(4, 12), 1.0, &cfg).unwrap())
    });
    let start = RootConfiguration::from_angles_over_2pi(&[0.0, 0.1, 0.2], None).unwrap();
    group.bench_function("local_n3_grid24", |b| b.iter(|| local_search(&start, 1.0, &cfg, 24, 20).unwrap()));
    group.finish();
}

fn wagner(c: &mut Criterion) {
    c.bench_function("wagner_coefficients_r1.3", |b| {
        b.iter(|| wagner_coefficients(&WagnerParams::new(1.3)).unwrap())
    });
}

criterion_group!(benches, search, wagner);
criterion_main!(benches);
