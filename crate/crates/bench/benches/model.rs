use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use num_complex::Complex64;
use ring_ob_bench::{reference_cavity, reference_eta, reference_medium};
use ring_ob_core::bistability::default_x_max;
use ring_ob_core::{
    derive_blockade, eta_closed_form, hysteresis, io_from_intracavity, propagate_analytic,
    propagate_numeric, trace_curve, transmission_profile, vdw_integral_numeric,
};

fn bench_nonlinearity(c: &mut Criterion) {
    let p = reference_medium();
    let d = derive_blockade(&p).unwrap();
    c.bench_function("eta_closed_form", |b| {
        b.iter(|| eta_closed_form(black_box(&p), black_box(&d)).unwrap())
    });

    let omega_sq = Complex64::from(p.omega_c * p.omega_c);
    c.bench_function("vdw_integral_numeric", |b| {
        b.iter(|| vdw_integral_numeric(black_box(&p), black_box(omega_sq)).unwrap())
    });
}

fn bench_propagation(c: &mut Criterion) {
    let eta = reference_eta();
    let e_in = Complex64::from(0.4);
    c.bench_function("propagate_analytic", |b| {
        b.iter(|| propagate_analytic(black_box(&eta), black_box(e_in), 1.0).unwrap())
    });
    c.bench_function("propagate_numeric_4096", |b| {
        b.iter(|| propagate_numeric(black_box(&eta), black_box(e_in), 1.0, 4096))
    });
}

fn bench_cavity_and_curves(c: &mut Criterion) {
    let eta = reference_eta();
    let cav = reference_cavity();
    c.bench_function("io_from_intracavity", |b| {
        b.iter(|| io_from_intracavity(black_box(&eta), black_box(&cav), black_box(0.7)).unwrap())
    });

    let x_max = default_x_max(&eta).unwrap();
    c.bench_function("trace_curve_2001", |b| {
        b.iter(|| trace_curve(black_box(&eta), black_box(&cav), x_max, 2001).unwrap())
    });

    let i_t_max = 0.99 * cav.t_mirror / (2.0 * eta.b);
    c.bench_function("transmission_profile_2001", |b| {
        b.iter(|| transmission_profile(black_box(&eta), black_box(&cav), i_t_max, 2001).unwrap())
    });

    let curve = trace_curve(&eta, &cav, x_max, 4001).unwrap();
    let i_i_max = curve.turning_points[0].i_in * 1.4;
    c.bench_function("hysteresis_500_steps", |b| {
        b.iter(|| hysteresis(black_box(&curve), i_i_max, 500).unwrap())
    });
}

criterion_group!(
    benches,
    bench_nonlinearity,
    bench_propagation,
    bench_cavity_and_curves
);
criterion_main!(benches);
