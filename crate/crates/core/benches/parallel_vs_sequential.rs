use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linkrel::{fading_link, mcsim, metrics, Grid, McConfig};
use std::hint::black_box;

fn monte_carlo(c: &mut Criterion) {
    let baseline = fading_link();
    let redundant = baseline.with_retransmission(2).unwrap();
    let grid = metrics::default_grid();
    let mut group = c.benchmark_group("mcsim");
    group.sample_size(10);
    for (label, model) in [("series", &baseline), ("retransmission", &redundant)] {
        let cfg = McConfig::new(200_000, 1);
        group.bench_with_input(BenchmarkId::new("sequential", label), model, |b, m| {
            b.iter(|| mcsim::run_sequential(black_box(m), &cfg, &grid).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", label), model, |b, m| {
            b.iter(|| mcsim::run(black_box(m), &cfg.with_chunk_size(8192), &grid).unwrap())
        });
    }
    group.finish();
}

fn grid_sweeps(c: &mut Criterion) {
    let model = fading_link().with_retransmission(2).unwrap();
    let grid = Grid::new(5.0, 5000).unwrap();
    let mut group = c.benchmark_group("sweeps");
    group.bench_function("importance_ranking", |b| {
        b.iter(|| metrics::importance_ranking(black_box(&model), &grid))
    });
    group.bench_function("curves", |b| b.iter(|| metrics::curves(black_box(&model), &grid).unwrap()));
    group.bench_function("mean_tttf", |b| b.iter(|| metrics::mean_tttf(black_box(&model)).unwrap()));
    group.finish();
}

criterion_group!(benches, monte_carlo, grid_sweeps);
criterion_main!(benches);
