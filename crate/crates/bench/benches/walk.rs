use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use qwhydro_core::{
    dft_forward, evolve_spectral, make_grid, mode_propagator, run_hybrid, shock_initial_condition,
    HybridConfig, ShockParams, Spinor, SpinorField, WalkParams,
};

fn params() -> WalkParams {
    WalkParams::new(6.0, -1.0, 0.6).unwrap()
}

fn shock(n_exp: u32) -> SpinorField {
    let grid = make_grid(n_exp).unwrap();
    shock_initial_condition(&grid, &ShockParams::new(0.92, 6.0).unwrap()).unwrap()
}

fn bench_dft(c: &mut Criterion) {
    let mut g = c.benchmark_group("dft_forward");
    for n_exp in [10, 14, 17] {
        let f = shock(n_exp);
        g.bench_with_input(BenchmarkId::from_parameter(1usize << n_exp), &f, |b, f| {
            b.iter(|| dft_forward(black_box(f)))
        });
    }
    g.finish();
}

fn bench_evolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("evolve_spectral");
    g.sample_size(20);
    for n_exp in [8, 12] {
        let f = shock(n_exp);
        g.bench_with_input(BenchmarkId::from_parameter(1usize << n_exp), &f, |b, f| {
            b.iter(|| evolve_spectral(black_box(f), 256, &params()))
        });
    }
    g.finish();
}

fn bench_propagator(c: &mut Criterion) {
    let grid = make_grid(12).unwrap();
    c.bench_function("mode_propagator/1024_steps", |b| {
        b.iter(|| mode_propagator(black_box(5), 1024, &params(), &grid).unwrap())
    });
}

fn bench_hybrid(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_hybrid");
    g.sample_size(10);
    let f = shock(5);
    g.bench_function("ideal/32", |b| {
        b.iter(|| run_hybrid(black_box(&f), 64, &params(), &HybridConfig::ideal()).unwrap())
    });
    g.bench_function("sampled/32", |b| {
        b.iter(|| run_hybrid(black_box(&f), 64, &params(), &HybridConfig::default()).unwrap())
    });
    let dense = SpinorField::from_fn(*f.grid(), |p| {
        let v = Complex64::new((p as f64).cos(), 0.0);
        Spinor::new(v, v)
    });
    g.bench_function("sampled/32-dense", |b| {
        b.iter(|| run_hybrid(black_box(&dense), 64, &params(), &HybridConfig::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_dft, bench_evolve, bench_propagator, bench_hybrid);
criterion_main!(benches);
