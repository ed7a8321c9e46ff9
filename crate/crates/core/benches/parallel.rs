//! Sequential vs pooled execution for the census scan and the Hausdorff
//! kernels. Without the `parallel` feature both variants run sequentially.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cyclophi::census::{Census, Point, PointSet};
use cyclophi::exec::Executor;
use cyclophi::symmetry::{
    hausdorff_grid, scale_to_unit, trimmed_hausdorff, UnitCloud, DEFAULT_TRIM,
};

fn executors() -> [(&'static str, Executor); 2] {
    [
        ("sequential", Executor::sequential()),
        ("pool", Executor::with_workers(0)),
    ]
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census_scan");
    group.sample_size(10);
    for (label, exec) in executors() {
        let census = Census::new(exec);
        group.bench_with_input(BenchmarkId::new(label, 20_000), &20_000u64, |b, &n| {
            b.iter(|| census.scan_range(1, black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn cloud(rng: &mut StdRng, len: usize) -> UnitCloud {
    const SCALE: u64 = 1 << 20;
    let set: PointSet = (0..len)
        .map(|_| Point::new(rng.gen_range(2..=SCALE as i64), rng.gen_range(1..=SCALE)))
        .collect();
    scale_to_unit(&set, SCALE, SCALE).unwrap()
}

fn hausdorff(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(11);
    let a = cloud(&mut rng, 20_000);
    let b = cloud(&mut rng, 20_000);
    let mut group = c.benchmark_group("hausdorff");
    group.sample_size(10);
    for (label, exec) in executors() {
        group.bench_function(BenchmarkId::new("grid", label), |bench| {
            bench.iter(|| hausdorff_grid(black_box(&a), black_box(&b), &exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("trimmed", label), |bench| {
            bench.iter(|| {
                trimmed_hausdorff(black_box(&a), black_box(&b), DEFAULT_TRIM, &exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, census, hausdorff);
criterion_main!(benches);
