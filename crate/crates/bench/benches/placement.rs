use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ringfill_bench::{narrow_window, wide_window};
use ringfill_core::{
    check_requirements, label, plan_stage1, prose_oracle_stage1, run_lifecycle, sweep, SweepDomain,
    TokenId,
};

fn bench_label(c: &mut Criterion) {
    let p = wide_window(1 << 20);
    c.bench_function("label", |b| {
        let mut t = 0u64;
        b.iter(|| {
            t = (t + 7919) % p.token_count();
            label(&p, black_box(TokenId(t))).unwrap()
        })
    });
}

fn bench_plan(c: &mut Criterion) {
    let mut group = c.benchmark_group("plan_stage1");
    for rounds in [16u64, 256, 4096] {
        let wide = wide_window(rounds);
        let narrow = narrow_window(rounds);
        group.bench_with_input(
            BenchmarkId::new("closed_form/wide", rounds),
            &wide,
            |b, p| b.iter(|| plan_stage1(p)),
        );
        group.bench_with_input(
            BenchmarkId::new("closed_form/narrow", rounds),
            &narrow,
            |b, p| b.iter(|| plan_stage1(p)),
        );
        group.bench_with_input(
            BenchmarkId::new("pointer_oracle/wide", rounds),
            &wide,
            |b, p| b.iter(|| prose_oracle_stage1(p)),
        );
    }
    group.finish();
}

fn bench_lifecycle(c: &mut Criterion) {
    let p = wide_window(1024);
    c.bench_function("run_lifecycle", |b| b.iter(|| run_lifecycle(black_box(&p))));
    let trace = run_lifecycle(&p);
    c.bench_function("check_requirements", |b| {
        b.iter(|| check_requirements(black_box(&trace)))
    });
}

fn bench_sweep(c: &mut Criterion) {
    let domain = SweepDomain {
        max_buckets: 6,
        ..Default::default()
    };
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("max_buckets_6", |b| b.iter(|| sweep(&domain).unwrap()));
    group.finish();
}

criterion_group!(
    benches,
    bench_label,
    bench_plan,
    bench_lifecycle,
    bench_sweep
);
criterion_main!(benches);
