use criterion::{black_box, criterion_group, criterion_main, Criterion};
use invburgers::experiment::run_table2;
use invburgers::{evolve, invariants, jet, BoundaryMode, EvolutionConfig, March, Stencil};
use invburgers_bench::{exponential_grid, sampled};

fn bench_jet(c: &mut Criterion) {
    let g = exponential_grid(32).unwrap();
    let (_, f) = sampled(&g).unwrap();
    c.bench_function("jet_32x32", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for n in 0..g.n_sites() - 2 {
                for m in 0..g.m_sites() - 2 {
                    acc += jet(&g, &f, n, m).unwrap().uxx;
                }
            }
            black_box(acc)
        })
    });
    c.bench_function("invariants_32x32", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for n in 0..g.n_sites() - 2 {
                for m in 0..g.m_sites() - 2 {
                    acc += invariants(&Stencil::from_grid(&g, &f, n, m).unwrap())
                        .unwrap()
                        .k[4];
                }
            }
            black_box(acc)
        })
    });
}

fn bench_evolve(c: &mut Criterion) {
    let g = exponential_grid(64).unwrap();
    let (exact, f) = sampled(&g).unwrap();
    let cfg = EvolutionConfig::oracle(g.n_sites() - 2, exact).with_march(March::Space);
    c.bench_function("evolve_space_64x64", |b| {
        b.iter(|| black_box(evolve(&g, &f, &cfg).unwrap()))
    });
}

fn bench_table2(c: &mut Criterion) {
    c.bench_function("table2", |b| {
        b.iter(|| black_box(run_table2((0.0, 0.1), BoundaryMode::Oracle, March::Space).unwrap()))
    });
}

criterion_group!(benches, bench_jet, bench_evolve, bench_table2);
criterion_main!(benches);
