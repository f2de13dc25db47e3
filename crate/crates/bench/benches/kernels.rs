use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use twoscale::bridge::demodulate;
use twoscale::expansion::kdv_coefficients;
use twoscale::functionals::{evaluate, Frame};
use twoscale::macro_pde::{solve_kdv_strain, KdvOptions};
use twoscale::{force, PotentialSpec, Verlet};
use twoscale_bench::{kdv_fields, kdv_strain, kg_chain, nls_scaling};

fn chain(c: &mut Criterion) {
    let mut g = c.benchmark_group("chain");
    for n in [256usize, 4096] {
        let s = kg_chain(n);
        g.bench_with_input(BenchmarkId::new("force", n), &s, |b, s| b.iter(|| force(black_box(s))));
        g.bench_with_input(BenchmarkId::new("verlet_100", n), &s, |b, s| {
            b.iter(|| {
                let mut v = Verlet::new(s.clone(), 0.01).unwrap();
                v.advance(100).unwrap();
                v.state.x[0]
            })
        });
    }
    g.finish();
}

fn kdv(c: &mut Criterion) {
    let fpu = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let co = kdv_coefficients(&fpu, 1.0).unwrap();
    let u = kdv_strain(256);
    let opts = KdvOptions { dt: 1e-3, output_interval: 0.1, ..Default::default() };
    c.bench_function("kdv_100_steps_256", |b| b.iter(|| solve_kdv_strain(black_box(&u), 40.0, &co, 0.1, &opts).unwrap().steps));
    let (x, xt) = kdv_fields(512);
    c.bench_function("kdv_functionals_512", |b| {
        b.iter(|| evaluate(&Frame::Kdv { c: 1.0 }, black_box(0.05), &x, &xt, &fpu).unwrap().l)
    });
}

fn bridge(c: &mut Criterion) {
    let (sc, kg) = nls_scaling(0.1);
    let s = twoscale::ChainState::zeros(sc.n, kg).unwrap();
    c.bench_function("demodulate_nls_400", |b| b.iter(|| demodulate(black_box(&s), &sc, 0.0).unwrap().fields.len()));
}

criterion_group!(benches, chain, kdv, bridge);
criterion_main!(benches);
