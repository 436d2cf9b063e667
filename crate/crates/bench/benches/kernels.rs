use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fracml::dynamics::{simulate, sweep, Axis, SweepFamily, SweepGrid, SweepMode, SweepOptions};
use fracml::fracops::{kernel_weights, memory_convolution_flat};
use fracml::spectra::{dense_eigenvalues, DEFAULT_DENSE_TOL};
use fracml::stability::{asymmetric_region, StabilityRegion};
use fracml::Complex64;
use fracml_bench::{linear_system, nonlinear_system, order, pseudo_random_matrix};

fn memory(c: &mut Criterion) {
    c.bench_function("kernel_weights 1e5", |b| b.iter(|| kernel_weights(order(0.4), black_box(100_000))));

    let w = kernel_weights(order(0.4), 4001).unwrap();
    let history: Vec<f64> = (0..4001 * 8).map(|i| (i as f64).sin()).collect();
    let mut out = vec![0.0; 8];
    c.bench_function("memory_convolution t=4000 N=8", |b| {
        b.iter(|| memory_convolution_flat(&w, black_box(&history), 8, 4000, &mut out))
    });

    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for horizon in [500usize, 2000] {
        group.bench_with_input(BenchmarkId::new("linear N=12", horizon), &horizon, |b, &t| {
            let spec = linear_system(12, t);
            b.iter(|| simulate(&spec))
        });
        group.bench_with_input(BenchmarkId::new("nonlinear N=7", horizon), &horizon, |b, &t| {
            let spec = nonlinear_system(7, t);
            b.iter(|| simulate(&spec))
        });
    }
    group.finish();
}

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_eigenvalues");
    for n in [16usize, 64, 128] {
        let m = pseudo_random_matrix(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| dense_eigenvalues(m, DEFAULT_DENSE_TOL))
        });
    }
    group.finish();
}

fn membership(c: &mut Criterion) {
    let points: Vec<Complex64> = (0..1000)
        .map(|i| {
            let t = i as f64 * 0.0061;
            Complex64::new(1.8 * t.cos() - 0.3, 1.4 * (3.0 * t).sin())
        })
        .collect();
    c.bench_function("region build M=8192", |b| b.iter(|| StabilityRegion::new(order(0.5))));
    let region = StabilityRegion::new(order(0.5));
    c.bench_function("classify 1000 eigenvalues", |b| {
        b.iter(|| points.iter().map(|z| region.classify(*z).margin).sum::<f64>())
    });
    let asym = asymmetric_region(order(0.3), 6).unwrap();
    c.bench_function("asymmetric classify 1000 points", |b| {
        b.iter(|| points.iter().map(|z| asym.classify(z.re, z.im).margin).sum::<f64>())
    });

    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let grid = SweepGrid {
        p1: Axis::new(-0.4, 0.4, 100).unwrap(),
        p2: Axis::new(-0.3, 1.1, 100).unwrap(),
    };
    let opts = SweepOptions::new(order(0.2), 8, SweepFamily::Symmetric, SweepMode::Analytic);
    group.bench_function("analytic 100x100", |b| b.iter(|| sweep(&grid, &opts)));
    group.finish();
}

criterion_group!(benches, memory, spectra, membership);
criterion_main!(benches);
