use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::Polynomial;
use super::rational::Rational;
use super::symbol::Symbol;

/// Reduced quotient of polynomials. The denominator has positive leading
/// coefficient and integer content 1, so equal functions compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Panics when `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Self::normalize_unit(num, den)
    }

    /// Builds from an already coprime pair.
    pub fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction::zero();
        }
        Self::normalize_unit(num, den)
    }

    fn normalize_unit(num: Polynomial, den: Polynomial) -> Self {
        let c = den.content();
        if c.is_one() {
            return RationalFunction { num, den };
        }
        let inv = c.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        RationalFunction::from_poly(Polynomial::from_int(c))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn contains_var(&self, var: &Symbol) -> bool {
        self.num.contains_var(var) || self.den.contains_var(var)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Symbol> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    /// `None` when zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalize_unit(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        RationalFunction::new(&self.num * p, self.den.clone())
    }

    pub fn div_poly(&self, p: &Polynomial) -> Self {
        RationalFunction::new(self.num.clone(), &self.den * p)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e >= 0 {
            let e = e as u32;
            RationalFunction {
                num: self.num.pow(e),
                den: self.den.pow(e),
            }
            .renormalized()
        } else {
            self.recip().expect("negative power of zero").pow(-e)
        }
    }

    fn renormalized(self) -> Self {
        Self::normalize_unit(self.num, self.den)
    }

    pub fn shift(&self, var: &Symbol, amount: i64) -> Self {
        RationalFunction {
            num: self.num.shift(var, amount),
            den: self.den.shift(var, amount),
        }
        .renormalized()
    }

    pub fn substitute(&self, var: &Symbol, value: &Polynomial) -> Self {
        RationalFunction::new(
            self.num.substitute(var, value),
            self.den.substitute(var, value),
        )
    }

    pub fn substitute_all(&self, map: &BTreeMap<Symbol, Polynomial>) -> Self {
        RationalFunction::new(self.num.substitute_all(map), self.den.substitute_all(map))
    }

    /// Substitutes a rational function for `var`.
    pub fn compose(&self, var: &Symbol, value: &RationalFunction) -> Self {
        let eval = |p: &Polynomial| -> RationalFunction {
            let mut acc = RationalFunction::zero();
            for c in p.coefficients_in(var).iter().rev() {
                acc = &(&acc * value) + &RationalFunction::from_poly(c.clone());
            }
            acc
        };
        &eval(&self.num) / &eval(&self.den)
    }

    /// Partial evaluation; `None` if the denominator vanishes.
    pub fn eval_partial(&self, values: &BTreeMap<Symbol, Rational>) -> Option<Self> {
        let d = self.den.eval_partial(values);
        if d.is_zero() {
            return None;
        }
        Some(RationalFunction::new(self.num.eval_partial(values), d))
    }

    /// `None` if the denominator vanishes or a symbol is unassigned.
    pub fn eval(&self, values: &BTreeMap<Symbol, Rational>) -> Option<Rational> {
        let d = self.den.eval(values)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(values)? / d)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RationalFunction::from_poly(&self.num + &rhs.num);
            }
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_one() {
            return RationalFunction::from_coprime(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return RationalFunction::from_coprime(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        let g = poly_gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RationalFunction::new(num, &(&a * &b) * &g)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        RationalFunction::constant(c)
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        RationalFunction::from_int(c)
    }
}

pub(crate) fn needs_parens(p: &Polynomial) -> bool {
    if p.len() > 1 {
        return true;
    }
    match p.leading_term() {
        Some((m, c)) => !m.is_one() && (!c.is_one() || m.factors().len() > 1 || m.factors()[0].1 > 1),
        None => false,
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn v(s: &str) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::var(Symbol::new(s)))
    }

    #[test]
    fn canonical_form() {
        let n = Polynomial::var(Symbol::n());
        let one = Polynomial::one();
        let r = RationalFunction::new((&n + &one).scale(&rat(-2)), (&n + &one).scale(&rat(4)));
        assert_eq!(r, RationalFunction::constant(crate::algebra::rational::ratio(-1, 2)));
        let a = RationalFunction::new(one.clone(), n.scale(&rat(-3)));
        assert_eq!(a.denom(), &n);
        assert_eq!(a.numer(), &Polynomial::constant(crate::algebra::rational::ratio(-1, 3)));
    }

    #[test]
    fn field_arithmetic() {
        let (n, k) = (v("n"), v("k"));
        let one = RationalFunction::one();
        let x = &(&n + &one) / &(&(&n - &k) + &one);
        let y = &(&n - &k) / &(&k + &one);
        let z = &(&x * &y) + &(&x - &y);
        let back = &(&z - &(&x - &y)) / &y;
        assert_eq!(back, x);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn display_forms() {
        let (n, k) = (v("n"), v("k"));
        let one = RationalFunction::one();
        let r = &k / &(&(&n - &k) + &one);
        assert_eq!(r.to_string(), "k/(n - k + 1)");
        let s = &(&n + &one) / &k;
        assert_eq!(s.to_string(), "(n + 1)/k");
    }
}
