use std::hint::black_box;

use cranklab_core::{
    build_stat_table, crank_generating_series, enumerate_partitions, partition_counts,
    partition_counts_mod, Method, StatKind,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("partition_counts");
    for n in [1_000usize, 5_000] {
        // Memoised after the first call, so this measures the cached path.
        g.bench_with_input(BenchmarkId::new("exact_cached", n), &n, |b, &n| {
            b.iter(|| partition_counts(black_box(n)))
        });
        g.bench_with_input(BenchmarkId::new("mod_1925", n), &n, |b, &n| {
            b.iter(|| partition_counts_mod(black_box(n), 1925))
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumeration");
    for n in [30usize, 45] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let mut it = enumerate_partitions(black_box(n));
                let mut total = 0u64;
                while let Some(p) = it.next_slice() {
                    total += p.len() as u64;
                }
                total
            })
        });
    }
    g.finish();
}

fn crank(c: &mut Criterion) {
    let mut g = c.benchmark_group("crank_series");
    g.sample_size(10);
    for n in [200usize, 556] {
        g.bench_with_input(BenchmarkId::new("series", n), &n, |b, &n| {
            b.iter(|| crank_generating_series(black_box(n)))
        });
    }
    g.bench_function("table_rank_enum_40", |b| {
        b.iter(|| build_stat_table(StatKind::Rank, black_box(40), Method::Enumeration))
    });
    g.finish();
}

criterion_group!(benches, counts, enumeration, crank);
criterion_main!(benches);
