use std::fmt;

use num_traits::{One, Signed};

use super::{HypergeometricTerm, LinearForm};
use crate::algebra::ratfun::needs_parens;
use crate::algebra::{Polynomial, Rational, RationalFunction};
use crate::error::{Error, ParseError};
use crate::parse::{parse_expr, Expr, ExprKind};

/// Parses a term such as `binomial(n,k)*x^k/(1+x)^n`.
pub fn parse_term(text: &str) -> Result<HypergeometricTerm, Error> {
    let e = parse_expr(text)?;
    Ok(expr_to_term(&e)?)
}

fn at(pos: usize) -> impl Fn(Error) -> ParseError {
    move |e| match e {
        Error::Parse(p) => p,
        other => ParseError {
            position: pos,
            message: other.to_string(),
        },
    }
}

fn linear(e: &Expr) -> Result<LinearForm, ParseError> {
    let (coeffs, constant) = e.to_linear().map_err(|err| ParseError {
        position: err.position,
        message: format!("{} (factorial arguments and exponents must be integer-linear)", err.message),
    })?;
    Ok(LinearForm::new(coeffs, constant))
}

fn args(e: &Expr, name: &str, args: &[Expr], n: usize) -> Result<(), ParseError> {
    if args.len() != n {
        return Err(ParseError {
            position: e.pos,
            message: format!("{} expects {} argument(s), got {}", name, n, args.len()),
        });
    }
    Ok(())
}

/// Converts an expression tree to a term.
pub fn expr_to_term(e: &Expr) -> Result<HypergeometricTerm, ParseError> {
    let wrap = at(e.pos);
    match &e.kind {
        ExprKind::Num(_) | ExprKind::Sym(_) | ExprKind::Add(..) | ExprKind::Sub(..) => {
            HypergeometricTerm::from_ratfun(e.to_ratfun()?).map_err(wrap)
        }
        ExprKind::Neg(a) => Ok(expr_to_term(a)?.neg()),
        ExprKind::Mul(a, b) => Ok(expr_to_term(a)?.mul(&expr_to_term(b)?)),
        ExprKind::Div(a, b) => Ok(expr_to_term(a)?.div(&expr_to_term(b)?)),
        ExprKind::Pow(base, exp) => {
            if let Ok(i) = exp.to_integer() {
                return Ok(expr_to_term(base)?.pow(i));
            }
            let l = linear(exp)?;
            let b = base.to_ratfun().map_err(|err| ParseError {
                position: err.position,
                message: "symbolic exponents need a base free of factorials".into(),
            })?;
            if b.is_zero() {
                return Err(wrap(Error::Term("power of zero".into())));
            }
            let (num, den) = b.into_parts();
            let top = HypergeometricTerm::power(num, l.clone()).map_err(&wrap)?;
            let bottom = HypergeometricTerm::power(den, -&l).map_err(&wrap)?;
            Ok(top.mul(&bottom))
        }
        ExprKind::Fact(a) => HypergeometricTerm::factorial(linear(a)?, 1, false).map_err(wrap),
        ExprKind::Call(name, a) => match name.as_str() {
            "fact" => {
                args(e, name, a, 1)?;
                HypergeometricTerm::factorial(linear(&a[0])?, 1, false).map_err(wrap)
            }
            "sfact" => {
                args(e, name, a, 1)?;
                HypergeometricTerm::factorial(linear(&a[0])?, 1, true).map_err(wrap)
            }
            "binomial" => {
                args(e, name, a, 2)?;
                HypergeometricTerm::binomial(linear(&a[0])?, linear(&a[1])?).map_err(wrap)
            }
            other => Err(ParseError {
                position: e.pos,
                message: format!("unknown function '{}'", other),
            }),
        },
    }
}

fn poly_factor(p: &Polynomial) -> String {
    if needs_parens(p) {
        format!("({})", p)
    } else {
        p.to_string()
    }
}

fn base_text(b: &Polynomial) -> String {
    match b.constant_value() {
        Some(c) if c.is_integer() => c.to_string(),
        Some(c) => format!("({})", c),
        None if b.len() == 1 && b.total_degree() == Some(1) && b.leading_coefficient().is_one() => {
            b.to_string()
        }
        None => format!("({})", b),
    }
}

fn factorial_text(arg: &LinearForm, shadowed: bool, e: i64) -> String {
    let base = if shadowed {
        format!("sfact({})", arg)
    } else if arg.exponent_text() == arg.to_string() && arg.as_constant().is_none() {
        format!("{}!", arg)
    } else {
        format!("({})!", arg)
    };
    if e == 1 {
        base
    } else {
        format!("{}^{}", base, e)
    }
}

/// `true` when every coefficient is non-positive and some is negative.
fn is_negated(l: &LinearForm) -> bool {
    let mut any = l.constant_term() < 0;
    if l.constant_term() > 0 {
        return false;
    }
    for c in l.coeffs().values() {
        if *c > 0 {
            return false;
        }
        any |= *c < 0;
    }
    any
}

impl fmt::Display for HypergeometricTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        let c: &Rational = &self.constant;
        if !c.numer().abs().is_one() {
            num.push(c.numer().abs().to_string());
        }
        if !c.denom().is_one() {
            den.push(c.denom().to_string());
        }
        if !self.sign.is_zero() {
            num.push(format!("(-1)^{}", self.sign.exponent_text()));
        }
        for (b, e) in &self.powers {
            if is_negated(e) {
                den.push(format!("{}^{}", base_text(b), (-e).exponent_text()));
            } else {
                num.push(format!("{}^{}", base_text(b), e.exponent_text()));
            }
        }
        let r: &RationalFunction = &self.rational;
        if !r.numer().is_one() {
            num.push(poly_factor(r.numer()));
        }
        if !r.denom().is_one() {
            den.push(poly_factor(r.denom()));
        }
        for ((arg, shadowed), e) in &self.factorials {
            if *e > 0 {
                num.push(factorial_text(arg, *shadowed, *e));
            } else {
                den.push(factorial_text(arg, *shadowed, -*e));
            }
        }
        if c.is_negative() {
            f.write_str("-")?;
        }
        if num.is_empty() {
            f.write_str("1")?;
        } else {
            f.write_str(&num.join("*"))?;
        }
        match den.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den[0]),
            _ => write!(f, "/({})", den.join("*")),
        }
    }
}
