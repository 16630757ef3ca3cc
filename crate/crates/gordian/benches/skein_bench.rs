//! Parallel vs sequential skein evaluation on the family diagrams.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gordian::knotio::{to_pd, Presentation};
use gordian::skein::SkeinEngine;

fn bench_engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("homfly");
    let cases = [
        ("pretzel-9", Presentation::Pretzel(1, 1, 1)),
        ("pretzel-15", Presentation::Pretzel(2, 2, 2)),
        ("twist-10", Presentation::Twist(4)),
    ];
    for (name, pres) in &cases {
        let pd = to_pd(pres).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", name), &pd, |b, pd| {
            let engine = SkeinEngine::new(32);
            b.iter(|| engine.homfly(pd).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("sequential", name), &pd, |b, pd| {
            let engine = SkeinEngine::sequential(32);
            b.iter(|| engine.homfly(pd).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_engines);
criterion_main!(benches);
