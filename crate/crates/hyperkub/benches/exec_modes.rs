//! Sequential against data-parallel execution.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hyperkub::census::class_sizes_by_enumeration;
use hyperkub::oracle::{full_state_bfs, DEFAULT_MEM_CAP};
use hyperkub::puzzle::PuzzleParams;
use hyperkub::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_sizes_by_enumeration");
    for (n, k) in [(4, 9), (6, 6)] {
        let p = PuzzleParams::new(n, k).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, p), &p, |b, &p| {
                b.iter(|| class_sizes_by_enumeration(black_box(p), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn pocket(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_state_bfs");
    group.sample_size(10).measurement_time(Duration::from_secs(60));
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| full_state_bfs(exec, DEFAULT_MEM_CAP).unwrap().total));
    }
    group.finish();
}

criterion_group!(benches, enumeration, pocket);
criterion_main!(benches);
