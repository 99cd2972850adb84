//! Parallel vs sequential kernels on the dense forward-operator paths.
//!
//! With the default `parallel` feature the public kernels run on rayon; the
//! `_seq` variants are the sequential fallback. Building the bench with
//! `--no-default-features` makes both columns sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pcm_core::haar::{assemble_forward, Frequencies, WaveletBasis};
use pcm_core::proxops::{cg_least_squares, CgSettings};
use pcm_core::sampling::make_plan;

fn operator_kernels(c: &mut Criterion) {
    let basis = WaveletBasis::haar_1d(9); // n = 512
    let plan = make_plan(1024, 0.25, 7).unwrap();
    let a = assemble_forward(&basis, plan.clone().into_frequencies()).unwrap();
    let x: Vec<f64> = (0..a.cols()).map(|j| (j as f64 * 0.37).sin()).collect();
    let y = a.matrix().matvec_real(&x);

    let mut group = c.benchmark_group("dense_kernels_1024x512");
    group.bench_function(BenchmarkId::new("matvec", "parallel"), |b| {
        b.iter(|| black_box(a.matrix().matvec_real(black_box(&x))))
    });
    group.bench_function(BenchmarkId::new("matvec", "sequential"), |b| {
        b.iter(|| black_box(a.matrix().matvec_real_seq(black_box(&x))))
    });
    group.bench_function(BenchmarkId::new("adjoint", "parallel"), |b| {
        b.iter(|| black_box(a.matrix().adjoint_re(black_box(&y))))
    });
    group.bench_function(BenchmarkId::new("adjoint", "sequential"), |b| {
        b.iter(|| black_box(a.matrix().adjoint_re_seq(black_box(&y))))
    });
    group.finish();

    let mut group = c.benchmark_group("assembly_1024x512");
    group.sample_size(10);
    group.bench_function("assemble_forward", |b| {
        b.iter(|| black_box(assemble_forward(&basis, plan.clone().into_frequencies()).unwrap()))
    });
    group.finish();
}

fn projection_solve(c: &mut Criterion) {
    let basis = WaveletBasis::haar_1d(7); // n = 128
    let plan = make_plan(256, 0.25, 3).unwrap();
    let a = assemble_forward(&basis, plan.into_frequencies()).unwrap();
    let c_true: Vec<f64> = (0..a.cols())
        .map(|j| if j % 11 == 0 { 1.0 } else { 0.0 })
        .collect();
    let fhat = a.apply(&c_true);

    let mut group = c.benchmark_group("p_stage_256x128");
    group.sample_size(20);
    group.bench_function("cg_least_squares", |b| {
        b.iter(|| {
            black_box(
                cg_least_squares(a.matrix(), black_box(&fhat), &CgSettings::default()).unwrap(),
            )
        })
    });
    group.finish();
}

criterion_group!(benches, operator_kernels, projection_solve);
criterion_main!(benches);
