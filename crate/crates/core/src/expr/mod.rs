// SPDX-License-Identifier: Apache-2.0

//! Univariate real expressions in the variable `t`.
//!
//! Expressions are parsed from text, evaluated with IEEE semantics (domain
//! violations surface as NaN or infinities instead of errors), differentiated
//! symbolically and printed back to text that reparses to an
//! evaluation-equivalent tree.
//!
//! ```
//! use impdens::expr::Expr;
//!
//! let f = Expr::parse("t^5 + t").unwrap();
//! let df = f.differentiate();
//! assert_eq!(f.eval(1.0), 2.0);
//! assert_eq!(df.eval(1.0), 6.0);
//! ```

mod diff;
mod parse;
mod simplify;

use std::fmt;

pub use parse::ParseError;

/// Built-in functions of one argument, plus negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Atan,
}

impl UnaryOp {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            UnaryOp::Neg => -x,
            UnaryOp::Sin => x.sin(),
            UnaryOp::Cos => x.cos(),
            UnaryOp::Tan => x.tan(),
            UnaryOp::Exp => x.exp(),
            UnaryOp::Ln => x.ln(),
            UnaryOp::Sqrt => x.sqrt(),
            UnaryOp::Atan => x.atan(),
        }
    }

    /// Function name as written in source text. `Neg` has none.
    pub fn name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Neg => None,
            UnaryOp::Sin => Some("sin"),
            UnaryOp::Cos => Some("cos"),
            UnaryOp::Tan => Some("tan"),
            UnaryOp::Exp => Some("exp"),
            UnaryOp::Ln => Some("ln"),
            UnaryOp::Sqrt => Some("sqrt"),
            UnaryOp::Atan => Some("atan"),
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<UnaryOp> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "exp" => UnaryOp::Exp,
            "ln" => UnaryOp::Ln,
            "sqrt" => UnaryOp::Sqrt,
            "atan" => UnaryOp::Atan,
            _ => return None,
        })
    }

    pub const FUNCTIONS: [UnaryOp; 7] = [
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Tan,
        UnaryOp::Exp,
        UnaryOp::Ln,
        UnaryOp::Sqrt,
        UnaryOp::Atan,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    /// General power. Only meaningful for a positive base unless the
    /// exponent happens to evaluate to an integer.
    Pow,
}

impl BinaryOp {
    pub fn apply(self, l: f64, r: f64) -> f64 {
        match self {
            BinaryOp::Add => l + r,
            BinaryOp::Sub => l - r,
            BinaryOp::Mul => l * r,
            BinaryOp::Div => l / r,
            BinaryOp::Pow => l.powf(r),
        }
    }

    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Abstract syntax tree of a real function of `t`.
///
/// A power whose exponent is a constant integer is stored as [`Expr::PowInt`]
/// so that differentiation produces the plain power-rule form
/// `n * u^(n-1) * u'`, valid for negative bases too. Both power variants
/// evaluate through `powf`, so tagging never changes a value.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i32),
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, ParseError> {
        parse::parse(source)
    }

    pub fn constant(value: f64) -> Expr {
        Expr::Const(value)
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Expr {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Expr {
        Expr::Binary(op, Box::new(left), Box::new(right))
    }

    pub fn powi(base: Expr, exponent: i32) -> Expr {
        Expr::PowInt(Box::new(base), exponent)
    }

    /// Builds `base ^ exponent`, tagging constant integer exponents.
    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        match exponent {
            Expr::Const(c) if is_small_integer(c) => Expr::powi(base, c as i32),
            other => Expr::binary(BinaryOp::Pow, base, other),
        }
    }

    /// Evaluates at `t`. Out-of-domain operations propagate NaN or infinity.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Unary(op, child) => op.apply(child.eval(t)),
            Expr::Binary(op, l, r) => op.apply(l.eval(t), r.eval(t)),
            Expr::PowInt(base, n) => base.eval(t).powf(*n as f64),
        }
    }

    /// Exact symbolic derivative with respect to `t`, simplified.
    pub fn differentiate(&self) -> Expr {
        diff::derivative(self).simplify()
    }

    /// Applies value-preserving rewrites: constant folding and the identities
    /// `x+0`, `x*1`, `x*0`, `x^1`, `x^0 -> 1` (with `0^0` left alone).
    pub fn simplify(&self) -> Expr {
        simplify::simplify(self)
    }

    /// Fully parenthesized text that [`Expr::parse`] maps back to an
    /// evaluation-equivalent tree.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Expr::Const(_))
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Unary(_, c) | Expr::PowInt(c, _) => 1 + c.size(),
            Expr::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }
}

pub(crate) fn is_small_integer(c: f64) -> bool {
    c.fract() == 0.0 && c.abs() <= i32::MAX as f64
}

fn write_number(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    // `{:?}` is shortest round-trip; it never emits "inf"/"NaN" for finite c.
    if c.is_finite() {
        if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
            write!(f, "(-{:?})", -c)
        } else {
            write!(f, "{c:?}")
        }
    } else if c.is_nan() {
        write!(f, "(0.0/0.0)")
    } else if c > 0.0 {
        write!(f, "(1.0/0.0)")
    } else {
        write!(f, "(-1.0/0.0)")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_number(f, *c),
            Expr::Var => write!(f, "t"),
            Expr::Unary(UnaryOp::Neg, c) => write!(f, "(-{c})"),
            Expr::Unary(op, c) => write!(f, "{}({c})", op.name().unwrap_or_default()),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::PowInt(b, n) if *n < 0 => write!(f, "({b}^(-{}))", -(*n as i64)),
            Expr::PowInt(b, n) => write!(f, "({b}^{n})"),
        }
    }
}
