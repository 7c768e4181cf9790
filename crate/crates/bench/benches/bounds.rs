// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qmb_bench::{mixed_qubit, qutrit, qutrit_anchor};
use qmb_core::geometry::RANK_TOL;
use qmb_core::linalg::DEFAULT_SUPPORT_TOL;
use qmb_core::{
    compute_geometry, full_report, holevo_tangent_min, sld_solve, tangent_normal_decomposition, HolevoOptions,
    ReportOptions, WeightMatrix,
};

fn geometry(c: &mut Criterion) {
    let p = qutrit(2.0, 0.4);
    c.bench_function("sld_solve/qutrit", |b| {
        b.iter(|| sld_solve(black_box(&p.rho), black_box(&p.derivs[0]), DEFAULT_SUPPORT_TOL).unwrap())
    });
    c.bench_function("compute_geometry/qutrit", |b| {
        b.iter(|| compute_geometry(black_box(&p.rho), black_box(&p.derivs), DEFAULT_SUPPORT_TOL).unwrap())
    });
}

fn holevo(c: &mut Criterion) {
    let p = qutrit_anchor();
    let g = compute_geometry(&p.rho, &p.derivs, DEFAULT_SUPPORT_TOL).unwrap();
    let basis = tangent_normal_decomposition(&p.rho, &g, RANK_TOL).unwrap();
    let w = WeightMatrix::identity(3);
    let opts = HolevoOptions::default();
    c.bench_function("holevo/qutrit_anchor", |b| {
        b.iter(|| holevo_tangent_min(black_box(&g), black_box(&basis), &w, &opts).unwrap())
    });
}

fn reports(c: &mut Criterion) {
    let opts = ReportOptions::default();
    let q = mixed_qubit();
    let w2 = WeightMatrix::identity(2);
    c.bench_function("full_report/mixed_qubit", |b| {
        b.iter(|| full_report(black_box(&q), &w2, &opts).unwrap())
    });
    let t = qutrit(2.0, 0.4);
    let w3 = WeightMatrix::identity(3);
    c.bench_function("full_report/qutrit", |b| {
        b.iter(|| full_report(black_box(&t), &w3, &opts).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = geometry, holevo, reports
}
criterion_main!(benches);
