use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use g52::expm::expm;
use g52::foliation::{closed_flow, integrate_flow, DEFAULT_STEPS};
use g52::lie::skew_rank;
use g52::spectral::eigenvalues_numeric;
use g52::{exp_ad_closed, Algebra, FamilyId, Studied, VectorField};
use g52_bench::Inputs;
use std::hint::black_box;

const N: usize = 64;

fn families() -> Vec<FamilyId> {
    vec![Studied::G2.id(), Studied::G10(0.5).id()]
}

fn exponentials(c: &mut Criterion) {
    let inputs = Inputs::new(N, 1);
    let mut g = c.benchmark_group("exp_ad");
    for id in families() {
        let alg = Algebra::new(id).unwrap();
        let ads: Vec<_> = inputs.elements.iter().map(|u| alg.ad(u)).collect();
        g.bench_function(format!("expm/{id}"), |b| {
            b.iter(|| ads.iter().map(|m| expm(black_box(m)).unwrap()).count())
        });
        g.bench_function(format!("closed/{id}"), |b| {
            b.iter(|| {
                inputs.elements.iter().map(|u| exp_ad_closed(&id, black_box(u)).unwrap()).count()
            })
        });
    }
    g.finish();
}

fn spectra_and_ranks(c: &mut Criterion) {
    let inputs = Inputs::new(N, 2);
    let alg = Algebra::new(Studied::G9.id()).unwrap();
    let ads: Vec<_> = inputs.elements.iter().map(|u| alg.ad(u)).collect();
    let forms: Vec<_> = inputs.points.iter().map(|f| alg.kirillov(f)).collect();
    c.bench_function("eigenvalues_numeric/G9", |b| {
        b.iter(|| ads.iter().map(|m| eigenvalues_numeric(black_box(m)).unwrap()).count())
    });
    c.bench_function("skew_rank/G9", |b| {
        b.iter(|| forms.iter().map(|m| skew_rank(black_box(m)).unwrap()).sum::<usize>())
    });
}

fn flows(c: &mut Criterion) {
    let inputs = Inputs::new(8, 3);
    let field = VectorField::new(&Studied::G3.id(), 2).unwrap();
    let mut g = c.benchmark_group("flow");
    g.bench_function("rk4/G3 X2", |b| {
        b.iter_batched(
            || inputs.points.clone(),
            |ps| ps.iter().map(|v| integrate_flow(field, v, 0.5, DEFAULT_STEPS).unwrap()).count(),
            BatchSize::SmallInput,
        )
    });
    g.bench_function("closed/G3 X2", |b| {
        b.iter(|| inputs.points.iter().map(|v| closed_flow(field, black_box(v), 0.5).unwrap()).count())
    });
    g.finish();
}

criterion_group!(benches, exponentials, spectra_and_ranks, flows);
criterion_main!(benches);
