use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use linset_core::diffsets::{singer_set, theta_not_collineation_sweep, FieldModel};
use linset_core::equiv::{condition_a_check, pseudoregulus_witness, OrbitRoute};
use linset_core::projgeom::DEFAULT_BUDGET;
use linset_core::subgeom::{project_to_axis, pseudoregulus_l, sigma_pi, standard_axis, standard_center};
use linset_core::{FieldCtx, Perm, ReductionCtx};

fn field(p: u32, e: u32, t: u32) -> Arc<FieldCtx> {
    Arc::new(FieldCtx::new(p, e, t).unwrap())
}

fn field_ops(c: &mut Criterion) {
    let f = field(2, 1, 10);
    let els: Vec<_> = f.nonzero_elements().take(256).collect();
    c.bench_function("mul+inv F_1024", |b| {
        b.iter(|| els.iter().fold(els[0], |acc, &x| f.mul(acc, f.inv(black_box(x)))))
    });
}

fn singer(c: &mut Criterion) {
    let f = field(3, 1, 5);
    c.bench_function("singer set q=3 t=5", |b| b.iter(|| singer_set(black_box(&f)).unwrap()));
    let model = FieldModel::new(f.clone()).unwrap();
    c.bench_function("theta sweep q=3 t=5", |b| b.iter(|| theta_not_collineation_sweep(&model).unwrap()));
}

fn projection(c: &mut Criterion) {
    let f = field(3, 1, 5);
    let pi = Perm::new(vec![0, 2, 1, 3, 4]).unwrap();
    let (center, axis) = (standard_center(&f, 5), standard_axis(&f, 5));
    c.bench_function("sigma_pi q=3 t=5", |b| b.iter(|| sigma_pi(&f, black_box(&pi)).unwrap()));
    let s = sigma_pi(&f, &pi).unwrap();
    c.bench_function("project sigma_pi q=3 t=5", |b| {
        b.iter(|| project_to_axis(&f, &center, &axis, s.points()).unwrap())
    });
    c.bench_function("pseudoregulus q=3 t=5", |b| b.iter(|| pseudoregulus_l(&f).unwrap()));
}

fn condition_a(c: &mut Criterion) {
    let red = ReductionCtx::new(field(3, 1, 3), 2).unwrap();
    let l = red.linear_set(&pseudoregulus_witness(&red, 1)).unwrap();
    let mut group = c.benchmark_group("condition A");
    group.sample_size(10);
    group.bench_function("scattered q=3", |b| {
        b.iter(|| condition_a_check(&red, &l, 3, OrbitRoute::SetStabilizer, DEFAULT_BUDGET).unwrap())
    });
    group.finish();
}

criterion_group!(benches, field_ops, singer, projection, condition_a);
criterion_main!(benches);
