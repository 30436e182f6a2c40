//! Criterion benchmarks for the numerical hot paths: the two Fredholm
//! probability formulas, the F2 determinant, Airy evaluation, and a
//! batch of kinetic Monte Carlo replicas.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use madm::asympt::{airy_ai, f2};
use madm::fredholm::{prob_one_param, prob_two_param, OneParamQuad, TwoParamQuad};
use madm::sim::{sample_mth_positions, SimConfig};
use madm::{ModelParams, QueryPoint};

fn bench_two_param(c: &mut Criterion) {
    let params = ModelParams::one_param_from_tau(0.5).unwrap();
    let qp = QueryPoint::new(2, 1.0, 1).unwrap();
    let quad = TwoParamQuad {
        xi_nodes: 128,
        lambda_nodes: 64,
    };
    c.bench_function("prob_two_param m=2 t=1 x=1 (128/64 nodes)", |b| {
        b.iter(|| prob_two_param(&qp, &params, &quad).unwrap())
    });
}

fn bench_one_param(c: &mut Criterion) {
    let params = ModelParams::one_param_from_tau(0.5).unwrap();
    let qp = QueryPoint::new(2, 1.0, 1).unwrap();
    let quad = OneParamQuad {
        eta_nodes: 96,
        zeta_nodes: 48,
        mu_nodes: 48,
    };
    c.bench_function("prob_one_param m=2 t=1 x=1 (96/48/48 nodes)", |b| {
        b.iter(|| prob_one_param(&qp, &params, &quad).unwrap())
    });
}

fn bench_f2(c: &mut Criterion) {
    c.bench_function("f2(-2, order 80)", |b| b.iter(|| f2(-2.0, 80).unwrap()));
}

fn bench_airy(c: &mut Criterion) {
    c.bench_function("airy_ai sweep [-10, 10]", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            let mut x = -10.0;
            while x <= 10.0 {
                acc += airy_ai(x).unwrap();
                x += 0.25;
            }
            acc
        })
    });
}

fn bench_simulator(c: &mut Criterion) {
    let params = ModelParams::one_param_from_tau(0.5).unwrap();
    c.bench_function("simulator: 100 step-mode replicas to t_phys=6", |b| {
        b.iter_batched(
            || SimConfig::step(params, 6.0, 100, 7, 40).unwrap(),
            |cfg| sample_mth_positions(&cfg, 2).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_two_param, bench_one_param, bench_f2, bench_airy, bench_simulator
}
criterion_main!(benches);
