//! Wall-time benchmarks over the generator families. The interesting group
//! is the inexact-QPE contrast, where the scored order has to win; the rest
//! track regressions in the structured and saturated regimes.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdd::circuit::generators::{gen_ghz, gen_qft, gen_qpe, gen_random};
use qdd::{simulate, Circuit, SimConfig, Strategy};

fn sim(c: &Circuit, strategy: &Strategy) -> u64 {
    let cfg = SimConfig {
        strategy: strategy.clone(),
        ..SimConfig::default()
    };
    simulate(c, &cfg).unwrap().result.apply_ops
}

fn structured(c: &mut Criterion) {
    let ghz = gen_ghz(64).unwrap();
    c.bench_function("ghz_64", |b| b.iter(|| sim(&ghz, &Strategy::Original)));
    let qft = gen_qft(16, false).unwrap();
    c.bench_function("qft_16", |b| b.iter(|| sim(&qft, &Strategy::Original)));
}

fn order_contrast(c: &mut Criterion) {
    let qpe = gen_qpe(12, false).unwrap();
    let mut group = c.benchmark_group("qpe_inexact_12");
    for s in [Strategy::Original, Strategy::Proposed] {
        group.bench_with_input(BenchmarkId::from_parameter(&s), &s, |b, s| {
            b.iter(|| sim(&qpe, s))
        });
    }
    group.finish();
}

fn saturated(c: &mut Criterion) {
    let rnd = gen_random(10, 30, 0).unwrap();
    c.bench_function("random_10_saturated", |b| {
        b.iter(|| sim(&rnd, &Strategy::Proposed))
    });
}

criterion_group!(benches, structured, order_contrast, saturated);
criterion_main!(benches);
