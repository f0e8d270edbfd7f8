use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use packlab::ExactScalar;
use packlab_bench::coxmax;

fn field(c: &mut Criterion) {
    let x = ExactScalar::parse("7/3+4/5*sqrt(3)").unwrap();
    let y = ExactScalar::parse("-11/2+1/7*sqrt(3)").unwrap();
    c.bench_function("scalar_mul", |b| b.iter(|| black_box(&x) * black_box(&y)));
    c.bench_function("scalar_div", |b| b.iter(|| black_box(&x).div(black_box(&y))));
    c.bench_function("scalar_sign", |b| b.iter(|| black_box(&y).sign()));
}

fn reflection(c: &mut Criterion) {
    let (space, gens, s1) = coxmax();
    c.bench_function("reflect_sqrt3", |b| {
        b.iter(|| gens.iter().fold(s1.clone(), |x, g| space.reflect(g, &x).unwrap()))
    });
}

criterion_group!(benches, field, reflection);
criterion_main!(benches);
