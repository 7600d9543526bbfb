use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mop_core::exact::{int, ChainStrategy, MultiIndex};
use mop_core::kernels::{build_kernel, default_geometry, eval_contour, SumKernel};
use mop_core::{FamilySpec, HermiteSpec, LaguerreSpec};

fn kernels(c: &mut Criterion) {
    let herm: FamilySpec =
        HermiteSpec::new(vec![int(1), int(-1)], MultiIndex::new(vec![2, 1]).unwrap()).unwrap().into();
    let lag: FamilySpec =
        LaguerreSpec::new(vec![int(1), int(2)], MultiIndex::new(vec![1, 1]).unwrap(), 1).unwrap().into();
    let mut g = c.benchmark_group("kernels");
    g.bench_function("build hermite n=(2,1)", |b| b.iter(|| build_kernel(black_box(&herm)).unwrap()));
    let model = build_kernel(&herm).unwrap();
    g.bench_function("cd hermite", |b| b.iter(|| model.eval_cd(black_box(0.3), black_box(-0.7)).unwrap()));
    g.bench_function("cd hermite diagonal", |b| b.iter(|| model.eval_cd(black_box(0.3), black_box(0.3)).unwrap()));
    let sum = SumKernel::new(&herm, &herm.n().chain(ChainStrategy::RoundRobin)).unwrap();
    g.bench_function("sum hermite", |b| b.iter(|| sum.eval(black_box(0.3), black_box(-0.7)).unwrap()));
    for (name, spec, x, y) in [("hermite", &herm, 0.3, -0.7), ("laguerre", &lag, 1.0, 2.0)] {
        let geometry = default_geometry(spec);
        for nodes in [256, 512] {
            g.bench_function(format!("contour {name} N={nodes}"), |b| {
                b.iter(|| eval_contour(spec, black_box(x), black_box(y), nodes, &geometry).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
