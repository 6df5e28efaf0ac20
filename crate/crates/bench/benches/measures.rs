use bmie_core::hyperprior::{ml2_estimate, Ml2Options};
use bmie_core::measures::{bcp, equispaced, global_measures, sidak_nu};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn coverage(c: &mut Criterion) {
    c.bench_function("bcp", |b| b.iter(|| bcp(black_box(3.2), black_box(3.5), black_box(1.7), black_box(2.0))));

    let sigmas = equispaced(0.01, 10.0, 1000);
    let nus = vec![sidak_nu(0.1, sigmas.len()).unwrap(); sigmas.len()];
    c.bench_function("global_measures_m1000", |b| {
        b.iter(|| global_measures(black_box(&nus), black_box(3.5), &sigmas, 2.0, 0.1).unwrap())
    });
}

fn hyperprior(c: &mut Criterion) {
    let sigmas = equispaced(0.05, 2.0, 500);
    let xs: Vec<f64> = sigmas.iter().enumerate().map(|(i, s)| ((i * 37) % 101) as f64 / 50.0 - 1.0 + 0.3 * s).collect();
    let opts = Ml2Options::default();
    c.bench_function("ml2_m500", |b| b.iter(|| ml2_estimate(black_box(&xs), &sigmas, &opts).unwrap()));
}

criterion_group!(benches, coverage, hyperprior);
criterion_main!(benches);
