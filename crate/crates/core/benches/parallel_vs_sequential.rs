use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hrq_core::enumsolver::solve_fpt_subsets;
use hrq_core::ilp::{solve_hrqlut_xp, DEFAULT_NODE_BUDGET};
use hrq_core::oracle::batch_has_stable;
use hrq_core::random::{random_instance, random_large, RandomParams};
use hrq_core::Exec;
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn fpt_subsets(c: &mut Criterion) {
    let mut group = c.benchmark_group("fpt_subsets");
    group.sample_size(10);
    // Planted cycle with mostly quota-three hospitals: many subsets are tried before a verdict.
    let params = RandomParams {
        min_lower: 2,
        ..RandomParams::strict(30, 14, 3).planted_cycle()
    };
    let inst = random_large(5, 30, 14, 4, &params);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "n30_m14"), &inst, |b, inst| {
            b.iter(|| solve_fpt_subsets(black_box(inst), exec).unwrap())
        });
    }
    group.finish();
}

fn oracle_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_batch");
    group.sample_size(10);
    let params = RandomParams::strict(7, 5, 3);
    let batch: Vec<_> = (0..256).map(|s| random_instance(s, &params)).collect();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, batch.len()), &batch, |b, batch| {
            b.iter(|| batch_has_stable(black_box(batch), exec))
        });
    }
    group.finish();
}

fn xp_guesses(c: &mut Criterion) {
    let mut group = c.benchmark_group("ilp_xp_guesses");
    group.sample_size(10);
    let inst = random_instance(
        11,
        &RandomParams::strict(6, 3, 3).with_ties(0.4).planted_cycle(),
    );
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "n6_m3"), &inst, |b, inst| {
            b.iter(|| solve_hrqlut_xp(black_box(inst), exec, DEFAULT_NODE_BUDGET).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fpt_subsets, oracle_batch, xp_guesses);
criterion_main!(benches);
