use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use littlewood_bench::{golden_silver, paper_psi, seed_zero, sweep_grid};
use littlewood_core::{
    condition_trace, coverage_sweep_with, liminf_trajectory, region_area_mc, Precision, Region,
    SweepOptions, Target, DEFAULT_BUDGET,
};

fn membership_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("coverage_sweep");
    g.sample_size(10);
    let psi = paper_psi();
    let shifts = seed_zero();
    for &q in &[256u64, 1024] {
        let grid = sweep_grid(q);
        // Skip the indices whose regions are the whole torus so that the
        // early exit does not hide the per-region cost.
        let opts = SweepOptions { min_index: 100, ..Default::default() };
        g.throughput(Throughput::Elements(q * q));
        g.bench_with_input(BenchmarkId::new("paper_N500", q), &grid, |b, grid| {
            b.iter(|| coverage_sweep_with(500, &shifts, &psi, grid, Target::Full, &opts).unwrap())
        });
    }
    g.finish();
}

fn statistic_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("statistic_scan");
    let p = golden_silver();
    let shifts = seed_zero();
    g.throughput(Throughput::Elements(100_000));
    g.bench_function("double_1e5", |b| {
        b.iter(|| liminf_trajectory(&p, &shifts, black_box(100_000), 100_000, Precision::Double, DEFAULT_BUDGET).unwrap())
    });
    g.sample_size(10);
    g.throughput(Throughput::Elements(10_000));
    g.bench_function("high_1e4", |b| {
        b.iter(|| liminf_trajectory(&p, &shifts, black_box(10_000), 10_000, Precision::High, DEFAULT_BUDGET).unwrap())
    });
    g.finish();
}

fn condition(c: &mut Criterion) {
    let psi = paper_psi();
    let mut g = c.benchmark_group("condition_trace");
    g.throughput(Throughput::Elements(1_000_000));
    g.sample_size(20);
    g.bench_function("paper_1e6", |b| b.iter(|| condition_trace(&psi, 0.2, black_box(1_000_000)).unwrap()));
    g.finish();
}

fn area(c: &mut Criterion) {
    let r = Region::new(10, (0.3, 0.7), 0.1).unwrap();
    let mut g = c.benchmark_group("area_mc");
    g.throughput(Throughput::Elements(1_000_000));
    g.bench_function("psi0.1_1e6", |b| b.iter(|| region_area_mc(&r, black_box(1_000_000), 1).unwrap()));
    g.finish();
}

criterion_group!(benches, membership_sweep, statistic_scan, condition, area);
criterion_main!(benches);
