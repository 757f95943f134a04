//! Sequential versus rayon execution of the data-parallel kernels.
//!
//! With the `parallel` feature every kernel runs twice: inside a one-thread
//! pool and inside the default pool. Without it only the sequential build
//! is measured.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use progcost::oracle::{choi_monte_carlo_su2, haar_fidelity, TorusGrid, MIN_SAMPLES};
use progcost::protocol::{sine_weights, viable_set};
use progcost::reporting::sweep;
use progcost::scoring::score_matrix;

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    let threads = default.current_num_threads();
    if progcost::exec::is_parallel() {
        vec![
            ("sequential".into(), single),
            (format!("rayon-{threads}"), default),
        ]
    } else {
        vec![("sequential".into(), single)]
    }
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_fidelity");
    group.sample_size(10);
    for n in [64u64, 256] {
        let set = viable_set(n, 2).unwrap();
        let q = sine_weights(&set).unwrap();
        let grid = TorusGrid::for_uses(2, n).unwrap();
        for (label, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(label, n), &n, |b, _| {
                b.iter(|| pool.install(|| black_box(haar_fidelity(&q, &grid).unwrap())))
            });
        }
    }
    group.finish();
}

fn score_matvec(c: &mut Criterion) {
    // d = 3 with N = 64 gives 4096 lattice points, the parallel threshold
    let set = viable_set(447, 3).unwrap();
    let s = score_matrix(&set);
    let x: Vec<f64> = (0..s.dimension()).map(|i| 1.0 + (i % 7) as f64).collect();
    let mut group = c.benchmark_group("score_mul_vec");
    for (label, pool) in pools() {
        group.bench_function(BenchmarkId::new(label, s.dimension()), |b| {
            b.iter(|| pool.install(|| black_box(s.mul_vec(&x))))
        });
    }
    group.finish();
}

fn protocol_sweep(c: &mut Criterion) {
    let ns = [32u64, 64, 128, 256, 512];
    let mut group = c.benchmark_group("sweep_d2");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(label.as_str(), |b| {
            b.iter(|| pool.install(|| black_box(sweep(2, &ns).unwrap())))
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let set = viable_set(4, 2).unwrap();
    let q = sine_weights(&set).unwrap();
    let mut group = c.benchmark_group("choi_monte_carlo");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(label.as_str(), |b| {
            b.iter(|| pool.install(|| black_box(choi_monte_carlo_su2(&q, MIN_SAMPLES, 0).unwrap())))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    quadrature,
    score_matvec,
    protocol_sweep,
    monte_carlo
);
criterion_main!(benches);
