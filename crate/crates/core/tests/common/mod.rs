// SPDX-License-Identifier: Apache-2.0

//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the code paths it is used to check.

#![allow(dead_code)]

use std::f64::consts::PI;

use impdens::expr::{BinaryOp, Expr, UnaryOp};
use impdens::{Bracket, ImplicitDensity, MonotoneMap, RngState, SourceDistribution};

pub fn bracket(lo: f64, hi: f64) -> Bracket {
    Bracket::new(lo, hi).unwrap()
}

pub fn density(f: &str, domain: (f64, f64), source: SourceDistribution) -> ImplicitDensity {
    let map = MonotoneMap::parse(f, bracket(domain.0, domain.1)).unwrap();
    ImplicitDensity::new(map, source).unwrap()
}

pub fn uniform01() -> SourceDistribution {
    SourceDistribution::uniform(0.0, 1.0).unwrap()
}

pub fn exponential01() -> SourceDistribution {
    SourceDistribution::exponential(0.1).unwrap()
}

pub fn std_normal() -> SourceDistribution {
    SourceDistribution::normal(0.0, 1.0).unwrap()
}

pub fn example1() -> ImplicitDensity {
    density("t^5+t", (-2.0, 2.0), uniform01())
}

/// The exponential source needs `f(domain)` to reach its `1 - 1e-9`
/// quantile (about 207), hence the wider domain.
pub fn example2() -> ImplicitDensity {
    density("t^5+t", (-3.0, 3.0), exponential01())
}

pub fn example3() -> ImplicitDensity {
    density("t + .9*sin(t)", (-2.0, 2.0), uniform01())
}

pub fn example4() -> ImplicitDensity {
    density("t^5+t", (-2.0, 2.0), std_normal())
}

pub fn indicator(c: bool) -> f64 {
    if c {
        1.0
    } else {
        0.0
    }
}

/// (0 <= t^5 + t <= 1)(5t^4 + 1)
pub fn oracle_pdf1(t: f64) -> f64 {
    let f = t.powi(5) + t;
    indicator((0.0..=1.0).contains(&f)) * (5.0 * t.powi(4) + 1.0)
}

/// 0.1 exp(-0.1 (t^5 + t)) (5t^4 + 1) on t^5 + t >= 0
pub fn oracle_pdf2(t: f64) -> f64 {
    let f = t.powi(5) + t;
    indicator(f >= 0.0) * 0.1 * (-0.1 * f).exp() * (5.0 * t.powi(4) + 1.0)
}

/// (0 <= t + 0.9 sin t <= 1)(1 + 0.9 cos t)
pub fn oracle_pdf3(t: f64) -> f64 {
    let f = t + 0.9 * t.sin();
    indicator((0.0..=1.0).contains(&f)) * (1.0 + 0.9 * t.cos())
}

/// exp(-(t^5 + t)^2 / 2) (5t^4 + 1) / sqrt(2 pi)
pub fn oracle_pdf4(t: f64) -> f64 {
    let f = t.powi(5) + t;
    (-0.5 * f * f).exp() * (5.0 * t.powi(4) + 1.0) / (2.0 * PI).sqrt()
}

/// Plain bisection for increasing `g`, run to adjacent floats.
pub fn bisect(g: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// erf by its alternating Maclaurin series.
pub fn erf_taylor(x: f64, terms: usize) -> f64 {
    let mut sum = 0.0;
    let mut term = x;
    for n in 0..terms {
        if n > 0 {
            term *= -x * x / n as f64;
        }
        sum += term / (2 * n + 1) as f64;
    }
    2.0 / PI.sqrt() * sum
}

pub fn central_difference(g: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (g(t + h) - g(t - h)) / (2.0 * h)
}

/// Random expression whose every operation stays inside its real domain
/// for any finite `t`: logarithms and roots act on `1 + u^2`, divisions
/// are by `1.5 + u^2`, tangents on `0.5 atan(u)`, exponentials on bounded
/// arguments and general powers on `2 + u^2`.
pub fn random_expr(rng: &mut RngState, depth: u32) -> Expr {
    let pick = |rng: &mut RngState, n: u64| rng.next_u64() % n;
    if depth == 0 || pick(rng, 5) == 0 {
        return if pick(rng, 3) == 0 {
            Expr::Const(((rng.next_uniform() * 4.0 - 2.0) * 100.0).round() / 100.0)
        } else {
            Expr::Var
        };
    }
    let sub = |rng: &mut RngState| random_expr(rng, depth - 1);
    let one_plus_sq = |u: Expr, c: f64| Expr::binary(BinaryOp::Add, Expr::Const(c), Expr::powi(u, 2));
    match pick(rng, 13) {
        0 => Expr::binary(BinaryOp::Add, sub(rng), sub(rng)),
        1 => Expr::binary(BinaryOp::Sub, sub(rng), sub(rng)),
        2 => Expr::binary(BinaryOp::Mul, sub(rng), sub(rng)),
        3 => {
            let num = sub(rng);
            Expr::binary(BinaryOp::Div, num, one_plus_sq(sub(rng), 1.5))
        }
        4 => Expr::powi(sub(rng), 2 + pick(rng, 2) as i32),
        5 => {
            let exponent = 0.5 + (rng.next_uniform() * 2.0 * 100.0).round() / 100.0;
            Expr::binary(BinaryOp::Pow, one_plus_sq(sub(rng), 2.0), Expr::Const(exponent + 0.005))
        }
        6 => Expr::unary(UnaryOp::Sin, sub(rng)),
        7 => Expr::unary(UnaryOp::Cos, sub(rng)),
        8 => Expr::unary(UnaryOp::Atan, sub(rng)),
        9 => Expr::unary(UnaryOp::Exp, Expr::unary(UnaryOp::Sin, sub(rng))),
        10 => Expr::unary(UnaryOp::Ln, one_plus_sq(sub(rng), 1.0)),
        11 => Expr::unary(UnaryOp::Sqrt, one_plus_sq(sub(rng), 1.0)),
        _ => Expr::unary(
            UnaryOp::Tan,
            Expr::binary(BinaryOp::Mul, Expr::Const(0.5), Expr::unary(UnaryOp::Atan, sub(rng))),
        ),
    }
}

/// Largest relative gap between the symbolic derivative and a central
/// difference with `h = 1e-6 max(1, |t|)` over `points` random t in
/// [-1.5, 1.5], scaled by `max(1, |f'|)`.
pub fn derivative_gap(e: &Expr, rng: &mut RngState, points: usize) -> f64 {
    let d = e.differentiate();
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let t = rng.next_uniform() * 3.0 - 1.5;
        let h = 1e-6 * t.abs().max(1.0);
        let fd = central_difference(|s| e.eval(s), t, h);
        let exact = d.eval(t);
        worst = worst.max((exact - fd).abs() / exact.abs().max(1.0));
    }
    worst
}
