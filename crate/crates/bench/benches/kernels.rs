use std::hint::black_box;

use avoidance_core::enumerate::{count_avoiders, count_monotone_avoiders};
use avoidance_core::perm::family_a_ki;
use avoidance_core::series::{differential_approximation, guess_dfinite};
use avoidance_core::tableaux::{rsk, syt_count_bounded};
use avoidance_core::Permutation;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_avoiders");
    group.sample_size(10);
    for (k, i, n) in [(4, 1, 10), (5, 1, 10), (5, 5, 10)] {
        let set = family_a_ki(k, i).unwrap();
        group.bench_with_input(BenchmarkId::new(format!("A({k},{i})"), n), &n, |b, &n| {
            b.iter(|| count_avoiders(black_box(&set), n))
        });
    }
    group.finish();
}

fn tableaux(c: &mut Criterion) {
    let perms: Vec<Permutation> = Permutation::all(8).step_by(97).collect();
    c.bench_function("rsk/n=8", |b| {
        b.iter(|| perms.iter().map(|p| rsk(black_box(p)).0.size()).sum::<usize>())
    });
    c.bench_function("syt_count_bounded/n=40,c=4", |b| b.iter(|| syt_count_bounded(black_box(40), 4)));
}

fn series(c: &mut Criterion) {
    let av1234 = count_monotone_avoiders(4, 39).unwrap();
    let catalan = count_monotone_avoiders(3, 40).unwrap();
    let mut group = c.benchmark_group("series");
    group.sample_size(10);
    group.bench_function("guess_dfinite/Av(1234)", |b| b.iter(|| guess_dfinite(black_box(&av1234), 3, 4)));
    group.bench_function("differential_approximation/Catalan", |b| {
        b.iter(|| differential_approximation(black_box(&catalan)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, enumeration, tableaux, series);
criterion_main!(benches);
