use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dars_core::simgen::{base_requirements, gen_value_dependencies, run_grid_with, Execution, SimulationConfig};
use dars_core::select::Method;
use dars_core::vdg::{all_pairs_strengths_parallel, all_pairs_strengths_sequential};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn strengths(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_pairs_strengths");
    group.sample_size(10);
    for n in [64usize, 256, 512] {
        let g = gen_value_dependencies(n, 0.2, 0.25, &mut ChaCha8Rng::seed_from_u64(n as u64));
        group.bench_with_input(BenchmarkId::new("sequential", n), &g, |b, g| b.iter(|| all_pairs_strengths_sequential(g)));
        group.bench_with_input(BenchmarkId::new("parallel", n), &g, |b, g| b.iter(|| all_pairs_strengths_parallel(g)));
    }
    group.finish();
}

fn grid(c: &mut Criterion) {
    let mut config = SimulationConfig::new(14);
    config.vdl = (0..10).map(|v| f64::from(v) / 10.0).collect();
    config.pdl = vec![0.05];
    config.methods = vec![Method::Pcbk, Method::Dars];
    let base = base_requirements(&config, config.n);

    let mut group = c.benchmark_group("run_grid");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(name, |b| b.iter(|| run_grid_with(&config, &base, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, strengths, grid);
criterion_main!(benches);
