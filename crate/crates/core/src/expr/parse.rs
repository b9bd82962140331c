// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser.
//!
//! ```text
//! expr   := term { ("+"|"-") term }
//! term   := factor { ("*"|"/") factor }
//! factor := "-" factor | atom [ "^" factor ]
//! atom   := NUMBER | "t" | "x" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"
//! ```
//!
//! Negation sits above `^`, so `-t^2` is `-(t^2)`, and `^` is
//! right-associative with an exponent that may itself be negated (`t^-2`).

use thiserror::Error;

use super::{BinaryOp, Expr, UnaryOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    /// Character index into the source, at most its length.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' | '.' => {
                let (value, end) = lex_number(&chars, i)?;
                i = end;
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => return Err(ParseError::new(i, format!("unexpected character '{other}'"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

fn lex_number(chars: &[char], start: usize) -> Result<(f64, usize), ParseError> {
    let digits = |mut i: usize| {
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(start);
    if i < chars.len() && chars[i] == '.' {
        let frac_end = digits(i + 1);
        if frac_end == i + 1 {
            return Err(ParseError::new(i + 1, "expected digit after '.'"));
        }
        i = frac_end;
    }
    // Exponent suffix only when digits follow; otherwise a trailing `e` is
    // left for the identifier lexer (and rejected as implicit product).
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    let text: String = chars[start..i].iter().collect();
    text.parse::<f64>()
        .map(|v| (v, i))
        .map_err(|_| ParseError::new(start, format!("malformed number '{text}'")))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(match self.factor()? {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::unary(UnaryOp::Neg, other),
            });
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expr::pow(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.at();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_close(at)?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" | "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                "e" => Ok(Expr::Const(std::f64::consts::E)),
                _ => {
                    let op = UnaryOp::from_name(&name).ok_or_else(|| {
                        ParseError::new(at, format!("unknown function or variable '{name}'"))
                    })?;
                    let open = self.at();
                    if self.bump() != Tok::LParen {
                        return Err(ParseError::new(open, format!("expected '(' after '{name}'")));
                    }
                    let arg = self.expr()?;
                    self.expect_close(open)?;
                    Ok(Expr::unary(op, arg))
                }
            },
            Tok::RParen => Err(ParseError::new(at, "unbalanced ')'")),
            Tok::End => Err(ParseError::new(at, "unexpected end of input")),
            other => Err(ParseError::new(at, format!("unexpected {}", describe(&other)))),
        }
    }

    fn expect_close(&mut self, open_at: usize) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            Tok::End => Err(ParseError::new(
                self.at(),
                format!("unbalanced '(' opened at position {open_at}"),
            )),
            other => Err(ParseError::new(
                self.at(),
                format!("expected ')' but found {}", describe(other)),
            )),
        }
    }
}

pub(crate) fn parse(source: &str) -> Result<Expr, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::End {
        return Err(ParseError::new(0, "empty expression"));
    }
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::RParen => Err(ParseError::new(p.at(), "unbalanced ')'")),
        other => Err(ParseError::new(
            p.at(),
            format!("trailing input starting with {}", describe(other)),
        )),
    }
}
