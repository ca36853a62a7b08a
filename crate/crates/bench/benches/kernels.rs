use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_rational::BigRational;

use expcarm::arith::{factorize, summatory, FunctionId, SieveConfig};
use expcarm::moments::{solve_c4, MomentModel};
use expcarm::pairs::mu_bound_value;
use expcarm::series::{evaluate_g, GEvalConfig};
use expcarm::zeta::{zeta_jet, zeta_laurent};
use expcarm::real::Real;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn arith(c: &mut Criterion) {
    c.bench_function("factorize 10^6 consecutive", |b| {
        b.iter(|| (1_000_000u64..1_010_000).map(|n| factorize(black_box(n)).unwrap().factors().len()).sum::<usize>())
    });
    let cfg = SieveConfig::default();
    let id = FunctionId::ExpCarmichael(1);
    c.bench_function("summatory lambda-e 10^6", |b| b.iter(|| summatory(&id, black_box(1_000_000), &[], &cfg).unwrap()));
}

fn analytic(c: &mut Criterion) {
    let s = Real::from_frac(3, 2, 256);
    c.bench_function("zeta jet len 4 at 3/2", |b| b.iter(|| zeta_jet(black_box(&s), 4, 192).unwrap()));
    c.bench_function("zeta laurent a = 3, k = 3", |b| b.iter(|| zeta_laurent(black_box(3), 3, 192).unwrap()));
    let cfg = GEvalConfig { prec: 128, ..Default::default() };
    let id = FunctionId::ExpCarmichael(1);
    let mut g = c.benchmark_group("G");
    g.sample_size(10);
    g.bench_function("G_1 at 1/2, d = 2", |b| b.iter(|| evaluate_g(&id, black_box(&q(1, 2)), 2, &cfg).unwrap()));
    g.finish();
}

fn pairs_and_moments(c: &mut Criterion) {
    c.bench_function("mu bound at 3/4, depth 6", |b| b.iter(|| mu_bound_value(black_box(&q(3, 4)), 6).unwrap()));
    c.bench_function("C4 table model", |b| b.iter(|| solve_c4(black_box(&MomentModel::Table)).unwrap()));
}

criterion_group!(benches, arith, analytic, pairs_and_moments);
criterion_main!(benches);
