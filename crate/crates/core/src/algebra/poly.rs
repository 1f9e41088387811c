use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{rat, rational_content, Rational};
use super::symbol::Symbol;

/// A power product of symbols, sorted by symbol with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(s, exp)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Symbol, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn degree(&self, var: &Symbol) -> u32 {
        self.0
            .iter()
            .find(|(s, _)| s == var)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *s {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((s.clone(), e - f)),
                }
            } else {
                out.push((s.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Splits off the power of `var`.
    pub fn split(&self, var: &Symbol) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(s, x)| {
                if s == var {
                    e = *x;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }
}

/// Lexicographic order; the first symbol in `Symbol` order is most significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => i += 1,
                        o => return o,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{}", s)?;
            } else {
                write!(f, "{}^{}", s, e)?;
            }
        }
        Ok(())
    }
}

/// Printing order: total degree first, then `n`, `k`, and parameters.
fn display_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    b.total_degree().cmp(&a.total_degree()).then_with(|| {
        let mut syms: Vec<&Symbol> = a.0.iter().chain(b.0.iter()).map(|(s, _)| s).collect();
        syms.sort();
        syms.dedup();
        for s in syms {
            match b.degree(s).cmp(&a.degree(s)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::monomial(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial::constant(rat(c))
    }

    pub fn var(s: Symbol) -> Self {
        Polynomial::monomial(Rational::one(), Monomial::var(s, 1))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    /// `var + shift`
    pub fn linear(var: Symbol, shift: i64) -> Self {
        &Polynomial::var(var) + &Polynomial::from_int(shift)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    /// The value when the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.get(&Monomial::one()).cloned();
        }
        None
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (s, _) in m.factors() {
                out.insert(s.clone());
            }
        }
        out
    }

    pub fn contains_var(&self, var: &Symbol) -> bool {
        self.terms.keys().any(|m| m.degree(var) > 0)
    }

    /// Degree in `var`; `None` for the zero polynomial.
    pub fn degree(&self, var: &Symbol) -> Option<u32> {
        self.terms.keys().map(|m| m.degree(var)).max()
    }

    /// Degree in `var` with the zero polynomial mapped to -1.
    pub fn deg(&self, var: &Symbol) -> i64 {
        self.degree(var).map(|d| d as i64).unwrap_or(-1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficients with respect to `var`, index = power.
    pub fn coefficients_in(&self, var: &Symbol) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(var);
            let e = e as usize;
            if out.len() <= e {
                out.resize(e + 1, Polynomial::zero());
            }
            out[e].terms.insert(rest, c.clone());
        }
        out
    }

    pub fn from_univariate(var: &Symbol, coeffs: &[Polynomial]) -> Self {
        let mut out = Polynomial::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let xm = Monomial::var(var.clone(), e as u32);
            for (m, v) in &c.terms {
                out.add_term(m.mul(&xm), v.clone());
            }
        }
        out
    }

    pub fn coefficient_of(&self, var: &Symbol, power: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(var);
            if e == power {
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    pub fn leading_coefficient_in(&self, var: &Symbol) -> Polynomial {
        match self.degree(var) {
            None => Polynomial::zero(),
            Some(d) => self.coefficient_of(var, d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(a, v)| (a.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces `var` by `var + amount`.
    pub fn shift(&self, var: &Symbol, amount: i64) -> Polynomial {
        if amount == 0 || !self.contains_var(var) {
            return self.clone();
        }
        self.substitute(var, &Polynomial::linear(var.clone(), amount))
    }

    /// Replaces `var` by `value`.
    pub fn substitute(&self, var: &Symbol, value: &Polynomial) -> Polynomial {
        if !self.contains_var(var) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(var);
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Simultaneous substitution of several symbols.
    pub fn substitute_all(&self, map: &BTreeMap<Symbol, Polynomial>) -> Polynomial {
        if map.is_empty() {
            return self.clone();
        }
        let mut cache: BTreeMap<(Symbol, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            let mut kept = Vec::new();
            for (s, e) in m.factors() {
                match map.get(s) {
                    Some(v) => {
                        let p = cache
                            .entry((s.clone(), *e))
                            .or_insert_with(|| v.pow(*e))
                            .clone();
                        term = &term * &p;
                    }
                    None => kept.push((s.clone(), *e)),
                }
            }
            let term = term.mul_monomial(&Monomial::from_pairs(kept));
            out = &out + &term;
        }
        out
    }

    /// Substitutes rational values for the assigned symbols.
    pub fn eval_partial(&self, values: &BTreeMap<Symbol, Rational>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut kept = Vec::new();
            for (s, e) in m.factors() {
                match values.get(s) {
                    Some(v) => coef *= num_traits::pow(v.clone(), *e as usize),
                    None => kept.push((s.clone(), *e)),
                }
            }
            out.add_term(Monomial::from_pairs(kept), coef);
        }
        out
    }

    /// Full evaluation; `None` if some symbol is unassigned.
    pub fn eval(&self, values: &BTreeMap<Symbol, Rational>) -> Option<Rational> {
        self.eval_partial(values).constant_value()
    }

    pub fn derivative(&self, var: &Symbol) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(var);
            if e > 0 {
                let nm = rest.mul(&Monomial::var(var.clone(), e - 1));
                out.add_term(nm, c * rat(e as i64));
            }
        }
        out
    }

    /// Positive rational `c` with `self / c` having coprime integer
    /// coefficients, signed so that the leading coefficient of the quotient
    /// is positive.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let c = rational_content(self.terms.values());
        if self.leading_coefficient().is_negative() {
            -c
        } else {
            c
        }
    }

    /// `self / content()`: integer coprime coefficients, positive leading
    /// coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let c = self.content();
        if c.is_one() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let (dm, dc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        if divisor.terms.len() == 1 {
            let inv = dc.recip();
            let mut out = BTreeMap::new();
            for (m, c) in &self.terms {
                out.insert(m.div(&dm)?, c * &inv);
            }
            return Some(Polynomial { terms: out });
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let inv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&dm)?;
            let qc = rc * &inv;
            for (m, c) in &divisor.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn is_univariate_in(&self, var: &Symbol) -> bool {
        self.terms
            .keys()
            .all(|m| m.is_one() || (m.factors().len() == 1 && m.factors()[0].0 == *var))
    }

    /// Coefficients grouped by the monomial in every symbol except `var`.
    pub fn split_by_other_monomials(&self, var: &Symbol) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(var);
            out.entry(rest)
                .or_default()
                .add_term(Monomial::var(var.clone(), e), c.clone());
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl From<Symbol> for Polynomial {
    fn from(s: Symbol) -> Self {
        Polynomial::var(s)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::from_int(c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| display_cmp(a.0, b.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n() -> Polynomial {
        Polynomial::var(Symbol::n())
    }
    fn k() -> Polynomial {
        Polynomial::var(Symbol::k())
    }

    #[test]
    fn shift_examples() {
        let k2 = k().pow(2);
        assert_eq!(
            k2.shift(&Symbol::k(), 1),
            &(&k2 + &k().scale(&rat(2))) + &Polynomial::one()
        );
        let p = &(&n() - &k()) + &Polynomial::one();
        let expected = &(&n() - &k()) + &Polynomial::from_int(2);
        assert_eq!(p.shift(&Symbol::n(), 1), expected);
        assert_eq!(p.shift(&Symbol::n(), 0), p);
    }

    #[test]
    fn exact_division() {
        let a = &n() + &k();
        let b = &n() - &Polynomial::from_int(3);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&(&n() + &Polynomial::one())).is_none());
    }

    #[test]
    fn display_orders_terms() {
        let p = &(&n().pow(2) - &(&n() * &k()).scale(&rat(3))) + &Polynomial::constant(super::super::rational::ratio(1, 2));
        assert_eq!(p.to_string(), "n^2 - 3*n*k + 1/2");
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let p = (&n() + &Polynomial::one()).scale(&rat(-4));
        assert_eq!(p.primitive(), &n() + &Polynomial::one());
        assert_eq!(p.content(), rat(-4));
    }
}
