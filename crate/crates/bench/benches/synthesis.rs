use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use modsup_bench::{local_system, problem};
use modsup_core::checks::check_moc_bounded;
use modsup_core::fixtures::railroad_global;
use modsup_core::pipeline::{run_global_mode, run_local_mode, RunOptions};
use modsup_core::{alphabet, ops::parallel};

fn supremal(c: &mut Criterion) {
    let mut group = c.benchmark_group("supremal");
    for states in [8, 32, 128] {
        let closed = problem(7, states, 6, true);
        let marked = problem(7, states, 6, false);
        group.bench_with_input(BenchmarkId::new("sup_n_closed", states), &closed, |b, p| {
            b.iter(|| black_box(p.sup_n_closed()))
        });
        group.bench_with_input(BenchmarkId::new("sup_n_fixpoint", states), &closed, |b, p| {
            b.iter(|| black_box(p.sup_n_fixpoint()))
        });
        group.bench_with_input(BenchmarkId::new("sup_cn", states), &marked, |b, p| {
            b.iter(|| black_box(p.sup_cn()))
        });
    }
    group.finish();
}

fn modular(c: &mut Criterion) {
    let mut group = c.benchmark_group("modular");
    for modules in [2, 3, 4] {
        let m = local_system(11, modules, 6);
        group.bench_with_input(BenchmarkId::new("parallel", modules), &m, |b, m| {
            b.iter(|| black_box(parallel(m.plants())))
        });
        group.bench_with_input(BenchmarkId::new("local_mode", modules), &m, |b, m| {
            let opts = RunOptions {
                verify_monolithic: true,
                ..RunOptions::default()
            };
            b.iter(|| black_box(run_local_mode(m, &opts).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("moc_bound_6", modules), &m, |b, m| {
            b.iter(|| black_box(check_moc_bounded(m, 0, 6)))
        });
    }
    group.finish();
}

fn railroad(c: &mut Criterion) {
    let m = railroad_global();
    let opts = RunOptions {
        kappa: Some(alphabet(["w_w", "w_e"])),
        verify_monolithic: true,
        ..RunOptions::default()
    };
    c.bench_function("railroad_global_mode", |b| {
        b.iter(|| black_box(run_global_mode(&m, &opts).unwrap()))
    });
}

criterion_group!(benches, supremal, modular, railroad);
criterion_main!(benches);
