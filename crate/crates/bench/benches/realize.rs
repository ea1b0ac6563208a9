use coaxial_bench::partition;
use coaxial_core::realizer::{numerator_polynomial, realize};
use coaxial_core::{Complex64, RealizeConfig};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn realize_benches(c: &mut Criterion) {
    let cfg = RealizeConfig { rng_seed: 1, ..RealizeConfig::default() };
    let double = partition(&[2]);
    c.bench_function("realize/q4_double_zero", |b| {
        b.iter(|| realize(black_box(&[2.0, -2.0, 1.0, -1.0]), &double, &cfg))
    });
    let triple = partition(&[3]);
    c.bench_function("realize/q5_triple_zero", |b| {
        b.iter(|| realize(black_box(&[3.0, -1.0, 2.0, -2.5, -1.5]), &triple, &cfg))
    });
    let none = RealizeConfig { restarts: 8, ..cfg };
    c.bench_function("realize/q4_not_found_8_restarts", |b| {
        b.iter(|| realize(black_box(&[1.0, 1.0, -1.0, -1.0]), &double, &none))
    });
    let z: Vec<Complex64> = (0..12).map(|k| Complex64::from_polar(1.0 + k as f64 * 0.1, k as f64)).collect();
    let residues: Vec<f64> = (0..12).map(|k| if k % 2 == 0 { 1.0 + k as f64 } else { -(k as f64) }).collect();
    c.bench_function("numerator_polynomial/q12", |b| b.iter(|| numerator_polynomial(black_box(&residues), &z)));
}

criterion_group!(benches, realize_benches);
criterion_main!(benches);
