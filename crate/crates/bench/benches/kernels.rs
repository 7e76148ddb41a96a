use criterion::{criterion_group, criterion_main, Criterion};
use ellq::cgkit::{
    beta_power_bruteforce, cg_closed_form_variant, ClosedFormVariant, SingularVectorSpec,
};
use ellq::rmatrix::dybe_residual;
use ellq::series::{elliptic_v, VSeriesSpec};
use ellq::theta::bracket;
use ellq::{ModularParams, C64};
use std::hint::black_box;

fn kernels(c: &mut Criterion) {
    let pm = ModularParams::real(0.5, 3.3).unwrap();
    let u = C64::new(0.37, 0.11);
    c.bench_function("bracket", |b| b.iter(|| bracket(black_box(u), &pm, false)));

    let ft = VSeriesSpec::frenkel_turaev(
        C64::new(0.31, 0.05),
        C64::new(0.23, -0.02),
        C64::new(0.17, 0.03),
        C64::new(0.41, 0.01),
        6,
        pm,
    );
    c.bench_function("elliptic_v 10V9 s=6", |b| {
        b.iter(|| elliptic_v(black_box(&ft)).unwrap())
    });

    c.bench_function("dybe residual", |b| {
        b.iter(|| {
            dybe_residual(
                black_box(u),
                C64::new(-0.21, 0.04),
                C64::new(0.13, -0.07),
                C64::new(1.7, 0.2),
                &pm,
            )
            .unwrap()
        })
    });

    let spec = SingularVectorSpec::new(2, 2, 1, C64::new(0.9, 0.05)).unwrap();
    let p = C64::new(1.3, 0.137);
    c.bench_function("cg closed form", |b| {
        b.iter(|| {
            cg_closed_form_variant(
                &spec,
                1,
                0,
                black_box(u),
                p,
                ClosedFormVariant::Corrected,
                &pm,
            )
            .unwrap()
        })
    });
    c.bench_function("cg brute force", |b| {
        b.iter(|| beta_power_bruteforce(&spec, 1, black_box(u), &pm).unwrap())
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
