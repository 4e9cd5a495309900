//! Timings for the expensive stages: exact Reynolds averaging, lifting a
//! block invariant to the faces, energy evaluation and the multistart search.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use icoflux_core::algebra::{homogeneous_monomials, int, Q5Scalar, SparsePoly};
use icoflux_core::bifurcation::{branch_solutions, minimize_restarts, MinimizeOptions};
use icoflux_core::energy::{CompiledEnergy, EnergyParams};
use icoflux_core::invariants::{lift_to_faces, reference_polynomial, reynolds_irrep};
use icoflux_core::irreps::IrrepId;

fn params() -> EnergyParams {
    EnergyParams::from_array([-1.0, 1.0, 1.0, -0.1, 1.0, 1.0, 1.0, 3.0, 1.0])
}

fn reynolds(c: &mut Criterion) {
    let monos = homogeneous_monomials(5, 4);
    let f = SparsePoly::term(monos[7].clone(), Q5Scalar::from_rational(int(1)));
    c.bench_function("reynolds rho5 degree 4 monomial", |b| b.iter(|| reynolds_irrep(black_box(&f), IrrepId::Rho5).unwrap()));
}

fn lift(c: &mut Criterion) {
    let p = &reference_polynomial(IrrepId::Rho5, 4, 2).unwrap().poly;
    c.bench_function("lift p42 rho5 to faces", |b| b.iter(|| lift_to_faces(black_box(p), IrrepId::Rho5).unwrap()));
}

fn evaluate(c: &mut Criterion) {
    let ce = CompiledEnergy::build(&params()).unwrap();
    let x: [f64; 12] = std::array::from_fn(|i| 0.1 * i as f64 - 0.4);
    c.bench_function("energy and gradient", |b| b.iter(|| ce.energy_and_gradient(black_box(&x))));
    c.bench_function("hessian", |b| b.iter(|| ce.hessian(black_box(&x))));
    c.bench_function("closed-form branches", |b| b.iter(|| branch_solutions(black_box(&params())).unwrap()));
}

fn minimize(c: &mut Criterion) {
    let ce = CompiledEnergy::build(&params()).unwrap();
    let mut group = c.benchmark_group("multistart");
    group.sample_size(10);
    group.bench_function("100 starts", |b| b.iter(|| minimize_restarts(&ce, &MinimizeOptions::new(100, 42)).unwrap()));
    group.finish();
}

criterion_group!(benches, reynolds, lift, evaluate, minimize);
criterion_main!(benches);
