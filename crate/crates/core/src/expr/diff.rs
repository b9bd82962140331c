// SPDX-License-Identifier: Apache-2.0

use super::{BinaryOp, Expr, UnaryOp};

fn c(v: f64) -> Expr {
    Expr::Const(v)
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinaryOp::Add, a, b)
}

fn sub(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinaryOp::Sub, a, b)
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinaryOp::Mul, a, b)
}

fn div(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinaryOp::Div, a, b)
}

fn un(op: UnaryOp, a: Expr) -> Expr {
    Expr::unary(op, a)
}

/// Raw derivative; the caller simplifies.
pub(super) fn derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => c(0.0),
        Expr::Var => c(1.0),
        Expr::Unary(op, u) => {
            let du = derivative(u);
            let u = (**u).clone();
            match op {
                UnaryOp::Neg => un(UnaryOp::Neg, du),
                UnaryOp::Sin => mul(un(UnaryOp::Cos, u), du),
                UnaryOp::Cos => mul(un(UnaryOp::Neg, un(UnaryOp::Sin, u)), du),
                UnaryOp::Tan => div(du, Expr::powi(un(UnaryOp::Cos, u), 2)),
                UnaryOp::Exp => mul(un(UnaryOp::Exp, u), du),
                UnaryOp::Ln => div(du, u),
                UnaryOp::Sqrt => div(du, mul(c(2.0), un(UnaryOp::Sqrt, u))),
                UnaryOp::Atan => div(du, add(c(1.0), Expr::powi(u, 2))),
            }
        }
        Expr::Binary(op, u, v) => {
            let du = derivative(u);
            let dv = derivative(v);
            let (u, v) = ((**u).clone(), (**v).clone());
            match op {
                BinaryOp::Add => add(du, dv),
                BinaryOp::Sub => sub(du, dv),
                BinaryOp::Mul => add(mul(du, v.clone()), mul(u, dv)),
                BinaryOp::Div => div(
                    sub(mul(du, v.clone()), mul(u, dv)),
                    Expr::powi(v, 2),
                ),
                // d(u^v) = u^v (v' ln u + v u'/u), valid for u > 0.
                BinaryOp::Pow => mul(
                    Expr::binary(BinaryOp::Pow, u.clone(), v.clone()),
                    add(mul(dv, un(UnaryOp::Ln, u.clone())), div(mul(v, du), u)),
                ),
            }
        }
        Expr::PowInt(u, n) => {
            let du = derivative(u);
            mul(mul(c(*n as f64), Expr::powi((**u).clone(), n - 1)), du)
        }
    }
}
