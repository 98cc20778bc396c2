use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hyperminhash::{expected_collisions_approx, expected_collisions_exact, SketchParams};
use std::hint::black_box;

fn bench_collisions(c: &mut Criterion) {
    let mut group = c.benchmark_group("expected_collisions");
    for r in [4u8, 10, 14] {
        let params = SketchParams::new(15, 6, r).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", r), &params, |b, params| {
            b.iter(|| expected_collisions_exact(black_box(1e6), black_box(5e5), params))
        });
        group.bench_with_input(BenchmarkId::new("approx", r), &params, |b, params| {
            b.iter(|| expected_collisions_approx(black_box(1e6), black_box(5e5), params).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_collisions);
criterion_main!(benches);
