use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use symspace_bench::{functions, functions_with_pieces, generator_sets};
use symspace_core::duality::{associate_norm, dual_norm_oracle};
use symspace_core::ext::{int, q};
use symspace_core::norms::{norm, NormSpec};
use symspace_core::rearrange::{distribution, rearrangement, rearrangement_from_distribution, transport_map};
use symspace_core::stone::{generate_algebra, ultrafilters};

fn rearrange(c: &mut Criterion) {
    let mut group = c.benchmark_group("rearrange");
    for pieces in [4, 12, 48] {
        let fs = functions_with_pieces(32, pieces);
        group.bench_with_input(BenchmarkId::new("sort", pieces), &fs, |b, fs| {
            b.iter(|| fs.iter().for_each(|f| {
                black_box(rearrangement(black_box(f)));
            }))
        });
        group.bench_with_input(BenchmarkId::new("via_distribution", pieces), &fs, |b, fs| {
            b.iter(|| fs.iter().for_each(|f| {
                black_box(rearrangement_from_distribution(&distribution(black_box(f))));
            }))
        });
        let nonneg: Vec<_> = fs.iter().map(|f| f.abs()).collect();
        group.bench_with_input(BenchmarkId::new("transport", pieces), &nonneg, |b, fs| {
            b.iter(|| fs.iter().for_each(|f| {
                black_box(transport_map(black_box(f)).unwrap());
            }))
        });
    }
    group.finish();
}

fn norms(c: &mut Criterion) {
    let fs = functions(64, 12);
    let specs = [
        NormSpec::Lp(int(1)),
        NormSpec::Lp(q(1, 2)),
        NormSpec::Lp(int(3)),
        NormSpec::LInf,
        NormSpec::L1PlusLInf,
        NormSpec::LInfPlusTail,
    ];
    let mut group = c.benchmark_group("norm");
    for spec in &specs {
        group.bench_with_input(BenchmarkId::from_parameter(spec.label()), spec, |b, spec| {
            b.iter(|| fs.iter().for_each(|f| {
                black_box(norm(black_box(f), spec));
            }))
        });
    }
    group.finish();
}

fn duality(c: &mut Criterion) {
    let mut group = c.benchmark_group("dual_norm");
    group.sample_size(20);
    for pieces in [2, 4, 6] {
        let gs = functions_with_pieces(8, pieces);
        group.bench_with_input(BenchmarkId::new("analytic_L2", pieces), &gs, |b, gs| {
            b.iter(|| gs.iter().for_each(|g| {
                black_box(associate_norm(g, &NormSpec::Lp(int(2))).unwrap());
            }))
        });
        group.bench_with_input(BenchmarkId::new("oracle_L2", pieces), &gs, |b, gs| {
            b.iter(|| gs.iter().for_each(|g| {
                black_box(dual_norm_oracle(g, &NormSpec::Lp(int(2)), 1).unwrap());
            }))
        });
        group.bench_with_input(BenchmarkId::new("oracle_sum", pieces), &gs, |b, gs| {
            b.iter(|| gs.iter().for_each(|g| {
                black_box(dual_norm_oracle(g, &NormSpec::L1PlusLInf, 1).unwrap());
            }))
        });
    }
    group.finish();
}

fn stone(c: &mut Criterion) {
    let mut group = c.benchmark_group("stone");
    for n in [6, 12, 16] {
        let sets = generator_sets(16, n, 4);
        group.bench_with_input(BenchmarkId::new("generate", n), &sets, |b, sets| {
            b.iter(|| sets.iter().map(|g| ultrafilters(&generate_algebra(n, g).unwrap()).len()).sum::<usize>())
        });
    }
    group.finish();
}

criterion_group!(benches, rearrange, norms, duality, stone);
criterion_main!(benches);
