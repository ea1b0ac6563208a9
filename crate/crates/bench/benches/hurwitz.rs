use coaxial_core::hurwitz::{hurwitz_realizable_bruteforce, BranchData, DEFAULT_CAP};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn bruteforce(c: &mut Criterion) {
    let cases = [
        ("d3_triple", BranchData::new(3, vec![2, 1], vec![2, 1], vec![3]).unwrap()),
        ("d5_transpositions", BranchData::new(5, vec![3, 2], vec![4, 1], vec![2, 2, 2]).unwrap()),
        ("d6_no_witness", BranchData::new(6, vec![3, 3], vec![3, 3], vec![3]).unwrap()),
        ("d7_mixed", BranchData::new(7, vec![4, 3], vec![5, 2], vec![3, 2]).unwrap()),
    ];
    let mut group = c.benchmark_group("hurwitz_bruteforce");
    for (name, bd) in &cases {
        group.bench_with_input(BenchmarkId::from_parameter(name), bd, |b, bd| {
            b.iter(|| hurwitz_realizable_bruteforce(black_box(bd), DEFAULT_CAP))
        });
    }
    group.finish();
}

criterion_group!(benches, bruteforce);
criterion_main!(benches);
