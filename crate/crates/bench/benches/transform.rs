// SPDX-License-Identifier: Apache-2.0

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use impdens::numerics::{erf, integrate_adaptive, solve_monotone};
use impdens::problem::builtin_example;
use impdens::verify::check_normalization;
use impdens::{Bracket, Expr, RngState, Tolerances};

fn expressions(c: &mut Criterion) {
    c.bench_function("parse quintic", |b| b.iter(|| Expr::parse(black_box("t^5 + t")).unwrap()));
    let f = Expr::parse("t + .9*sin(t)").unwrap();
    c.bench_function("differentiate sine", |b| b.iter(|| black_box(&f).differentiate()));
    c.bench_function("eval quintic", |b| {
        let f = Expr::parse("t^5 + t").unwrap();
        b.iter(|| f.eval(black_box(0.37)))
    });
}

fn kernels(c: &mut Criterion) {
    let tol = Tolerances::default();
    let unit = Bracket::new(0.0, 1.0).unwrap();
    c.bench_function("solve quintic", |b| {
        b.iter(|| {
            solve_monotone(|t| t.powi(5) + t, |t| 5.0 * t.powi(4) + 1.0, black_box(1.0), unit, &tol).unwrap()
        })
    });
    c.bench_function("integrate gaussian", |b| {
        b.iter(|| integrate_adaptive(|t| (-0.5 * t * t).exp(), -8.0, black_box(8.0), &tol).unwrap())
    });
    c.bench_function("erf", |b| b.iter(|| erf(black_box(1.3))));
}

fn laws(c: &mut Criterion) {
    for id in [1, 4] {
        let spec = builtin_example(id).unwrap();
        let d = spec.build().unwrap();
        let grid = spec.grid.unwrap();
        c.bench_function(&format!("example {id} pdf grid"), |b| {
            b.iter(|| grid.nodes().map(|t| d.pdf_x(t)).sum::<f64>())
        });
        c.bench_function(&format!("example {id} sample 1000"), |b| {
            b.iter(|| {
                let mut rng = RngState::new(42);
                (0..1000).map(|_| d.sample_x(&mut rng)).sum::<f64>()
            })
        });
        c.bench_function(&format!("example {id} normalization"), |b| {
            b.iter(|| check_normalization(&d, 1e-6).unwrap())
        });
    }
}

criterion_group!(benches, expressions, kernels, laws);
criterion_main!(benches);
