use bmie_core::measures::equispaced;
use bmie_core::{optimize_levels, search_c_star, LengthLoss};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn levels(c: &mut Criterion) {
    let loss = LengthLoss::default();
    let mut group = c.benchmark_group("optimize_levels");
    group.sample_size(10);
    for m in [100usize, 1000] {
        let sigmas = equispaced(0.01, 10.0, m);
        group.bench_function(format!("m{m}"), |b| {
            b.iter(|| optimize_levels(black_box(3.8), &sigmas, 2.0, 0.1, &loss).unwrap())
        });
    }
    group.finish();
}

fn threshold_search(c: &mut Criterion) {
    let loss = LengthLoss::default();
    let sigmas = equispaced(0.01, 10.0, 200);
    let mut group = c.benchmark_group("search_c_star");
    group.sample_size(10);
    group.bench_function("m200", |b| b.iter(|| search_c_star(&sigmas, black_box(3.0), 0.1, &loss, 6.0, 0.01).unwrap()));
    group.finish();
}

criterion_group!(benches, levels, threshold_search);
criterion_main!(benches);
