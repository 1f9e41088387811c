//! Lexer and expression tree shared by the term, polynomial, and operator
//! readers.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::{Polynomial, Rational, RationalFunction, Symbol};
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((Tok::Num(s.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^()!,".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(ParseError {
                position: pos,
                message: format!("unexpected character '{}'", c),
            });
        }
    }
    Ok(out)
}

/// Parsed expression with source positions.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub pos: usize,
    pub kind: ExprKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(BigInt),
    Sym(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Fact(Box<Expr>),
    Call(String, Vec<Expr>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat('+') {
                let rhs = self.term()?;
                lhs = Expr { pos, kind: ExprKind::Add(Box::new(lhs), Box::new(rhs)) };
            } else if self.eat('-') {
                let rhs = self.term()?;
                lhs = Expr { pos, kind: ExprKind::Sub(Box::new(lhs), Box::new(rhs)) };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.unary()?;
                lhs = Expr { pos, kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)) };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = Expr { pos, kind: ExprKind::Div(Box::new(lhs), Box::new(rhs)) };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr { pos, kind: ExprKind::Neg(Box::new(inner)) });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.postfix()?;
        let pos = self.pos();
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Expr { pos, kind: ExprKind::Pow(Box::new(base), Box::new(exp)) });
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary()?;
        loop {
            let pos = self.pos();
            if self.eat('!') {
                e = Expr { pos, kind: ExprKind::Fact(Box::new(e)) };
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.i += 1;
                Ok(Expr { pos, kind: ExprKind::Num(v) })
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    Ok(Expr { pos, kind: ExprKind::Call(name, args) })
                } else {
                    Ok(Expr { pos, kind: ExprKind::Sym(name) })
                }
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{}'", c)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, end: text.len() };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn perr<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position: pos, message: message.into() })
}

impl Expr {
    /// Evaluates the tree as a rational function; factorials and calls are
    /// rejected.
    pub fn to_ratfun(&self) -> Result<RationalFunction, ParseError> {
        Ok(match &self.kind {
            ExprKind::Num(v) => RationalFunction::constant(Rational::from_integer(v.clone())),
            ExprKind::Sym(s) => RationalFunction::from_poly(Polynomial::var(Symbol::new(s))),
            ExprKind::Add(a, b) => &a.to_ratfun()? + &b.to_ratfun()?,
            ExprKind::Sub(a, b) => &a.to_ratfun()? - &b.to_ratfun()?,
            ExprKind::Neg(a) => -&a.to_ratfun()?,
            ExprKind::Mul(a, b) => &a.to_ratfun()? * &b.to_ratfun()?,
            ExprKind::Div(a, b) => {
                let d = b.to_ratfun()?;
                if d.is_zero() {
                    return perr(b.pos, "division by zero");
                }
                &a.to_ratfun()? / &d
            }
            ExprKind::Pow(a, b) => {
                let e = b.to_integer()?;
                let base = a.to_ratfun()?;
                if e < 0 && base.is_zero() {
                    return perr(self.pos, "zero to a negative power");
                }
                base.pow(e)
            }
            ExprKind::Fact(_) => return perr(self.pos, "factorial not allowed here"),
            ExprKind::Call(name, _) => {
                return perr(self.pos, format!("function '{}' not allowed here", name))
            }
        })
    }

    /// Evaluates as a polynomial; denominators must be constants.
    pub fn to_poly(&self) -> Result<Polynomial, ParseError> {
        let r = self.to_ratfun()?;
        match r.denom().constant_value() {
            Some(c) => Ok(r.numer().scale(&c.recip())),
            None => perr(self.pos, "expected a polynomial"),
        }
    }

    /// Evaluates as an integer constant.
    pub fn to_integer(&self) -> Result<i64, ParseError> {
        let r = self.to_ratfun()?;
        match r.constant_value() {
            Some(c) if c.is_integer() => match i64::try_from(c.numer()) {
                Ok(v) => Ok(v),
                Err(_) => perr(self.pos, "integer too large"),
            },
            _ => perr(self.pos, "expected an integer"),
        }
    }

    /// Evaluates as an integer-linear combination of symbols:
    /// (coefficients by symbol, constant).
    pub fn to_linear(&self) -> Result<(BTreeMap<Symbol, i64>, i64), ParseError> {
        let p = self.to_poly()?;
        let mut coeffs = BTreeMap::new();
        let mut constant = 0i64;
        for (m, c) in p.terms() {
            if !c.is_integer() {
                return perr(self.pos, "non-integer coefficient in linear form");
            }
            let v = i64::try_from(c.numer())
                .or_else(|_| perr(self.pos, "coefficient too large"))?;
            match m.factors() {
                [] => constant = v,
                [(s, 1)] => {
                    coeffs.insert(s.clone(), v);
                }
                _ => return perr(self.pos, "expected a linear form"),
            }
        }
        Ok((coeffs, constant))
    }
}

/// Parses a polynomial.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    parse_expr(text)?.to_poly()
}

/// Parses a rational function.
pub fn parse_ratfun(text: &str) -> Result<RationalFunction, ParseError> {
    parse_expr(text)?.to_ratfun()
}
