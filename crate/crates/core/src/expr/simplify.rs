// SPDX-License-Identifier: Apache-2.0

use super::{is_small_integer, BinaryOp, Expr, UnaryOp};

fn finite_const(v: f64) -> Option<Expr> {
    v.is_finite().then_some(Expr::Const(v))
}

fn is(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == v)
}

pub(super) fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var => e.clone(),
        Expr::Unary(op, child) => {
            let c = simplify(child);
            if let Expr::Const(v) = c {
                if let Some(folded) = finite_const(op.apply(v)) {
                    return folded;
                }
            }
            match (op, c) {
                (UnaryOp::Neg, Expr::Unary(UnaryOp::Neg, inner)) => *inner,
                (op, c) => Expr::unary(*op, c),
            }
        }
        Expr::Binary(op, l, r) => {
            let l = simplify(l);
            let r = simplify(r);
            if let (Expr::Const(a), Expr::Const(b)) = (&l, &r) {
                if let Some(folded) = finite_const(op.apply(*a, *b)) {
                    return folded;
                }
            }
            match op {
                BinaryOp::Add if is(&l, 0.0) => r,
                BinaryOp::Add | BinaryOp::Sub if is(&r, 0.0) => l,
                BinaryOp::Sub if is(&l, 0.0) => simplify(&Expr::unary(UnaryOp::Neg, r)),
                BinaryOp::Mul if is(&l, 0.0) || is(&r, 0.0) => Expr::Const(0.0),
                BinaryOp::Mul if is(&l, 1.0) => r,
                BinaryOp::Mul | BinaryOp::Div if is(&r, 1.0) => l,
                BinaryOp::Pow => match r {
                    Expr::Const(v) if is_small_integer(v) => simplify(&Expr::powi(l, v as i32)),
                    r => Expr::binary(*op, l, r),
                },
                _ => Expr::binary(*op, l, r),
            }
        }
        Expr::PowInt(base, n) => {
            let b = simplify(base);
            if let Expr::Const(v) = b {
                if let Some(folded) = finite_const(v.powf(*n as f64)) {
                    return folded;
                }
            }
            match *n {
                1 => b,
                0 if !is(&b, 0.0) => Expr::Const(1.0),
                _ => Expr::powi(b, *n),
            }
        }
    }
}
