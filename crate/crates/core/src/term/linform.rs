use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::algebra::rational::rat;
use crate::algebra::{Polynomial, Symbol};
use crate::error::{Error, ParseError};
use crate::parse::parse_expr;

/// Integer-linear combination of symbols plus an integer constant, as in the
/// argument `a*n + b*k + c` of a factorial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<Symbol, i64>,
    constant: i64,
}

impl LinearForm {
    pub fn new(coeffs: impl IntoIterator<Item = (Symbol, i64)>, constant: i64) -> Self {
        let mut out = LinearForm::constant(constant);
        for (s, c) in coeffs {
            out.add_coeff(s, c);
        }
        out
    }

    pub fn constant(c: i64) -> Self {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(s: Symbol) -> Self {
        LinearForm::new([(s, 1)], 0)
    }

    pub fn zero() -> Self {
        LinearForm::constant(0)
    }

    fn add_coeff(&mut self, s: Symbol, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(s.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&s);
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let (coeffs, constant) = parse_expr(text)?.to_linear()?;
        Ok(LinearForm::new(coeffs, constant))
    }

    pub fn coeff(&self, s: &Symbol) -> i64 {
        self.coeffs.get(s).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> i64 {
        self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<Symbol, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant == 0
    }

    /// The value when no symbol occurs.
    pub fn as_constant(&self) -> Option<i64> {
        self.coeffs.is_empty().then_some(self.constant)
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.coeffs.contains_key(s)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.coeffs.keys()
    }

    /// Drops the constant.
    pub fn homogeneous(&self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.clone(),
            constant: 0,
        }
    }

    pub fn scale(&self, f: i64) -> LinearForm {
        if f == 0 {
            return LinearForm::zero();
        }
        LinearForm {
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), c * f)).collect(),
            constant: self.constant * f,
        }
    }

    pub fn add_constant(&self, c: i64) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.clone(),
            constant: self.constant + c,
        }
    }

    /// Coefficients and constant reduced to `{0, 1}`.
    pub fn mod2(&self) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.rem_euclid(2) == 1)
                .map(|(s, _)| (s.clone(), 1))
                .collect(),
            constant: self.constant.rem_euclid(2),
        }
    }

    pub fn to_poly(&self) -> Polynomial {
        let mut p = Polynomial::from_int(self.constant);
        for (s, c) in &self.coeffs {
            p = &p + &Polynomial::var(s.clone()).scale(&rat(*c));
        }
        p
    }

    /// Reads an integer-linear polynomial.
    pub fn from_poly(p: &Polynomial) -> Result<LinearForm, Error> {
        let mut out = LinearForm::zero();
        for (m, c) in p.terms() {
            let v = crate::algebra::rational::to_i64(c)
                .ok_or_else(|| Error::Term(format!("non-integer coefficient in {}", p)))?;
            match m.factors() {
                [] => out.constant = v,
                [(s, 1)] => out.add_coeff(s.clone(), v),
                _ => return Err(Error::Term(format!("{} is not linear", p))),
            }
        }
        Ok(out)
    }

    /// `None` when a symbol is unassigned.
    pub fn eval(&self, values: &BTreeMap<Symbol, i64>) -> Option<i64> {
        let mut acc = self.constant;
        for (s, c) in &self.coeffs {
            acc += c * values.get(s)?;
        }
        Some(acc)
    }

    /// Simultaneous substitution of linear forms for symbols.
    pub fn substitute(&self, map: &BTreeMap<Symbol, LinearForm>) -> LinearForm {
        let mut out = LinearForm::constant(self.constant);
        for (s, c) in &self.coeffs {
            match map.get(s) {
                Some(v) => out = &out + &v.scale(*c),
                None => out.add_coeff(s.clone(), *c),
            }
        }
        out
    }

    /// Replaces `s` by `s + amount`.
    pub fn shift(&self, s: &Symbol, amount: i64) -> LinearForm {
        self.add_constant(self.coeff(s) * amount)
    }

    /// Printed for use as an exponent: bare when a symbol or a non-negative
    /// integer, parenthesized otherwise.
    pub fn exponent_text(&self) -> String {
        let bare = match self.as_constant() {
            Some(c) => c >= 0,
            None => {
                self.constant == 0 && self.coeffs.len() == 1 && self.coeffs.values().all(|c| *c == 1)
            }
        };
        if bare {
            self.to_string()
        } else {
            format!("({})", self)
        }
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.constant += rhs.constant;
        for (s, c) in &rhs.coeffs {
            out.add_coeff(s.clone(), *c);
        }
        out
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &(-rhs)
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(-1)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_printing() {
        let a = LinearForm::parse("n - k + 1").unwrap();
        assert_eq!(a.to_string(), "n - k + 1");
        let b = LinearForm::parse("k - 1").unwrap();
        assert_eq!((&a + &b).to_string(), "n");
        assert_eq!((-&a).to_string(), "-n + k - 1");
        assert_eq!(LinearForm::parse("3*n + 2*k + 5").unwrap().mod2().to_string(), "n + 1");
    }

    #[test]
    fn substitution() {
        let a = LinearForm::parse("n - k").unwrap();
        let map = BTreeMap::from([
            (Symbol::n(), LinearForm::parse("-n-1").unwrap()),
            (Symbol::k(), LinearForm::parse("-k").unwrap()),
        ]);
        assert_eq!(a.substitute(&map), LinearForm::parse("k - n - 1").unwrap());
        assert_eq!(a.shift(&Symbol::k(), 2), LinearForm::parse("n - k - 2").unwrap());
    }
}
