use criterion::{black_box, criterion_group, criterion_main, Criterion};
use cyforge_core::io::parse_input;
use cyforge_core::period::{period_coefficients, principal_period, Support};
use cyforge_core::pfops::fit_operator_with_stride;
use cyforge_core::pipeline::{analyze_input, AnalyzeOptions};
use cyforge_core::{samples, LatticePolytope, Orientation, ReflexivePair};

fn support(text: &str) -> Support {
    Support::new(parse_input(text, Orientation::Auto).unwrap().points).unwrap()
}

fn hull(c: &mut Criterion) {
    let points = parse_input(samples::S44A, Orientation::Auto).unwrap().points;
    c.bench_function("hull_and_dual/44a", |b| {
        b.iter(|| ReflexivePair::from_dual(LatticePolytope::from_points(black_box(&points)).unwrap()).unwrap())
    });
    let input = parse_input(samples::S48B, Orientation::Auto).unwrap();
    c.bench_function("analyze/48b", |b| b.iter(|| analyze_input("48b", black_box(&input), &AnalyzeOptions::default())));
}

fn periods(c: &mut Criterion) {
    let s = support(samples::S44A);
    c.bench_function("period_sweep/44a/order20", |b| b.iter(|| period_coefficients(black_box(&s), 20)));
    let q = support("t1 + t2 + t3 + t4 + 1/(t1*t2*t3*t4)");
    c.bench_function("period_sweep/quintic/order50", |b| b.iter(|| period_coefficients(black_box(&q), 50)));
}

fn fitting(c: &mut Criterion) {
    let series = principal_period(&support(samples::S48A1), 40);
    let mut g = c.benchmark_group("fit");
    g.sample_size(10);
    g.bench_function("48a1/depth20", |b| b.iter(|| fit_operator_with_stride(black_box(&series), 4).unwrap()));
    g.finish();
}

criterion_group!(benches, hull, periods, fitting);
criterion_main!(benches);
