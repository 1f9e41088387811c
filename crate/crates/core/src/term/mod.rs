//! Closed-form (proper hypergeometric) terms in canonical product form.

mod linform;
mod text;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::gcd::content_in;
use crate::algebra::rational::{factorial, pow_rational};
use crate::algebra::{Polynomial, Rational, RationalFunction, Symbol};
use crate::error::{Error, Result};

pub use linform::LinearForm;
pub use text::parse_term;

/// `argument!` raised to `exponent`. A shadowed factor evaluates like any
/// other factorial; the flag records its origin so that shadowing can be
/// undone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorialFactor {
    pub argument: LinearForm,
    pub exponent: i64,
    pub shadowed: bool,
}

/// `constant * (-1)^sign * prod base^exponent * rational * prod argument!^exponent`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HypergeometricTerm {
    constant: Rational,
    powers: BTreeMap<Polynomial, LinearForm>,
    sign: LinearForm,
    rational: RationalFunction,
    factorials: BTreeMap<(LinearForm, bool), i64>,
}

/// Result of evaluating a term at an integer point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Value(Rational),
    Undefined,
}

impl Evaluation {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Evaluation::Value(v) => Some(v),
            Evaluation::Undefined => None,
        }
    }
}

/// Which factorial factors to shadow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShadowSelection {
    /// Every factor whose `n` and `k` coefficients do not cancel.
    Default,
    None,
    /// Factors named by their current argument.
    Explicit(Vec<LinearForm>),
}

fn bump(map: &mut BTreeMap<(LinearForm, bool), i64>, key: (LinearForm, bool), e: i64) {
    if e == 0 {
        return;
    }
    let v = map.entry(key.clone()).or_insert(0);
    *v += e;
    if *v == 0 {
        map.remove(&key);
    }
}

/// Order of vanishing of `p` at an integer point: the lowest total degree
/// after moving the point to the origin.
fn vanishing_order(p: &Polynomial, values: &BTreeMap<Symbol, i64>) -> i64 {
    let moved = values.iter().fold(p.clone(), |acc, (s, v)| acc.shift(s, *v));
    moved
        .terms()
        .map(|(m, _)| m.total_degree() as i64)
        .min()
        .unwrap_or(0)
}

fn poly_pow_signed(p: &Polynomial, e: i64, num: &mut Polynomial, den: &mut Polynomial) {
    if e > 0 {
        *num = &*num * &p.pow(e as u32);
    } else if e < 0 {
        *den = &*den * &p.pow((-e) as u32);
    }
}

impl HypergeometricTerm {
    fn raw(
        constant: Rational,
        powers: BTreeMap<Polynomial, LinearForm>,
        sign: LinearForm,
        rational: RationalFunction,
        factorials: BTreeMap<(LinearForm, bool), i64>,
    ) -> Result<Self> {
        let mut t = HypergeometricTerm {
            constant,
            powers: BTreeMap::new(),
            sign,
            rational,
            factorials: BTreeMap::new(),
        };
        if t.constant.is_zero() || t.rational.is_zero() {
            return Err(Error::Term("term is identically zero".into()));
        }
        for (base, exp) in powers {
            t.add_power(base, exp)?;
        }
        for ((arg, shadowed), e) in factorials {
            if e == 0 {
                continue;
            }
            match arg.as_constant() {
                Some(m) if m >= 0 => {
                    let f = Rational::from_integer(factorial(m as u64));
                    t.constant *= pow_rational(&f, e).expect("nonzero");
                }
                Some(m) if e < 0 => {
                    return Err(Error::Term(format!(
                        "term is identically zero: 1/({})! with {} < 0",
                        m, m
                    )))
                }
                Some(m) => {
                    return Err(Error::Term(format!("factorial of negative integer {}", m)))
                }
                None => bump(&mut t.factorials, (arg, shadowed), e),
            }
        }
        let c = t.rational.numer().content();
        if !c.is_one() {
            let (num, den) = t.rational.clone().into_parts();
            t.rational = RationalFunction::from_coprime(num.scale(&c.recip()), den);
            t.constant *= c;
        }
        t.sign = t.sign.mod2();
        if t.sign.constant_term() == 1 {
            t.constant = -t.constant;
            t.sign = t.sign.add_constant(-1);
        }
        Ok(t)
    }

    fn add_power(&mut self, base: Polynomial, exp: LinearForm) -> Result<()> {
        if exp.is_zero() {
            return Ok(());
        }
        if let Some(c) = base.constant_value() {
            if c.is_zero() {
                return Err(Error::Term("power of zero".into()));
            }
            let mut c = c;
            if c.is_negative() {
                self.sign = &self.sign + &exp;
                c = -c;
            }
            if c.is_one() {
                return Ok(());
            }
            if let Some(e) = exp.as_constant() {
                self.constant *= pow_rational(&c, e).expect("nonzero");
                return Ok(());
            }
            return self.merge_power(Polynomial::constant(c), exp);
        }
        if base.vars().iter().any(|s| !s.is_parameter()) {
            return Err(Error::Term(format!(
                "power base {} must not depend on n or k",
                base
            )));
        }
        let c = base.content();
        if !c.is_one() {
            self.add_power(Polynomial::constant(c.clone()), exp.clone())?;
        }
        let base = base.scale(&c.recip());
        if let Some(e) = exp.as_constant() {
            self.rational = &self.rational * &RationalFunction::from_poly(base).pow(e);
            return Ok(());
        }
        self.merge_power(base, exp)
    }

    fn merge_power(&mut self, base: Polynomial, exp: LinearForm) -> Result<()> {
        if exp.constant_term() != 0 && exp.as_constant().is_none() {
            self.add_power(base.clone(), LinearForm::constant(exp.constant_term()))?;
        }
        let exp = exp.homogeneous();
        let cur = self.powers.remove(&base).unwrap_or_default();
        let total = &cur + &exp;
        if total.is_zero() {
            return Ok(());
        }
        if let Some(e) = total.as_constant() {
            let b = base.clone();
            return self.add_power(b, LinearForm::constant(e));
        }
        self.powers.insert(base, total);
        Ok(())
    }

    pub fn one() -> Self {
        HypergeometricTerm::from_ratfun(RationalFunction::one()).expect("nonzero")
    }

    pub fn constant_term(c: Rational) -> Result<Self> {
        HypergeometricTerm::from_ratfun(RationalFunction::constant(c))
    }

    pub fn from_ratfun(r: RationalFunction) -> Result<Self> {
        HypergeometricTerm::raw(
            Rational::one(),
            BTreeMap::new(),
            LinearForm::zero(),
            r,
            BTreeMap::new(),
        )
    }

    pub fn from_poly(p: Polynomial) -> Result<Self> {
        HypergeometricTerm::from_ratfun(RationalFunction::from_poly(p))
    }

    pub fn factorial(argument: LinearForm, exponent: i64, shadowed: bool) -> Result<Self> {
        HypergeometricTerm::raw(
            Rational::one(),
            BTreeMap::new(),
            LinearForm::zero(),
            RationalFunction::one(),
            BTreeMap::from([((argument, shadowed), exponent)]),
        )
    }

    /// `base^exponent` for a base free of `n` and `k`.
    pub fn power(base: Polynomial, exponent: LinearForm) -> Result<Self> {
        HypergeometricTerm::raw(
            Rational::one(),
            BTreeMap::from([(base, exponent)]),
            LinearForm::zero(),
            RationalFunction::one(),
            BTreeMap::new(),
        )
    }

    /// `(-1)^exponent`.
    pub fn sign_power(exponent: LinearForm) -> Self {
        HypergeometricTerm::raw(
            Rational::one(),
            BTreeMap::new(),
            exponent,
            RationalFunction::one(),
            BTreeMap::new(),
        )
        .expect("nonzero")
    }

    /// `u! / (v! (u - v)!)`.
    pub fn binomial(u: LinearForm, v: LinearForm) -> Result<Self> {
        let w = &u - &v;
        HypergeometricTerm::raw(
            Rational::one(),
            BTreeMap::new(),
            LinearForm::zero(),
            RationalFunction::one(),
            [((u, false), 1), ((v, false), -1), ((w, false), -1)]
                .into_iter()
                .fold(BTreeMap::new(), |mut m, (key, e)| {
                    bump(&mut m, key, e);
                    m
                }),
        )
    }

    /// Assembles a term from its parts and normalizes it.
    pub fn from_parts(
        constant: Rational,
        powers: impl IntoIterator<Item = (Polynomial, LinearForm)>,
        sign: LinearForm,
        rational: RationalFunction,
        factorials: impl IntoIterator<Item = FactorialFactor>,
    ) -> Result<Self> {
        let mut pw: BTreeMap<Polynomial, LinearForm> = BTreeMap::new();
        let mut extra = HypergeometricTerm::one();
        for (b, e) in powers {
            if pw.contains_key(&b) {
                extra = extra.mul(&HypergeometricTerm::power(b, e)?);
            } else {
                pw.insert(b, e);
            }
        }
        let mut fs = BTreeMap::new();
        for f in factorials {
            bump(&mut fs, (f.argument, f.shadowed), f.exponent);
        }
        Ok(HypergeometricTerm::raw(constant, pw, sign, rational, fs)?.mul(&extra))
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn powers(&self) -> impl Iterator<Item = (&Polynomial, &LinearForm)> {
        self.powers.iter()
    }

    pub fn sign(&self) -> &LinearForm {
        &self.sign
    }

    pub fn rational(&self) -> &RationalFunction {
        &self.rational
    }

    pub fn factorials(&self) -> Vec<FactorialFactor> {
        self.factorials
            .iter()
            .map(|((a, s), e)| FactorialFactor {
                argument: a.clone(),
                exponent: *e,
                shadowed: *s,
            })
            .collect()
    }

    /// Every symbol occurring anywhere in the term.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = self.rational.vars();
        for (b, e) in &self.powers {
            out.extend(b.vars());
            out.extend(e.symbols().cloned());
        }
        out.extend(self.sign.symbols().cloned());
        for (a, _) in self.factorials.keys() {
            out.extend(a.symbols().cloned());
        }
        out
    }

    pub fn depends_on(&self, var: &Symbol) -> bool {
        self.symbols().contains(var)
    }

    pub fn mul(&self, other: &HypergeometricTerm) -> HypergeometricTerm {
        let mut powers = self.powers.clone();
        let mut extra = Vec::new();
        for (b, e) in &other.powers {
            match powers.get_mut(b) {
                Some(cur) => *cur = &*cur + e,
                None => extra.push((b.clone(), e.clone())),
            }
        }
        powers.extend(extra);
        let mut factorials = self.factorials.clone();
        for (k, e) in &other.factorials {
            bump(&mut factorials, k.clone(), *e);
        }
        HypergeometricTerm::raw(
            &self.constant * &other.constant,
            powers,
            &self.sign + &other.sign,
            &self.rational * &other.rational,
            factorials,
        )
        .expect("product of nonzero terms")
    }

    pub fn pow(&self, e: i64) -> HypergeometricTerm {
        HypergeometricTerm::raw(
            pow_rational(&self.constant, e).expect("nonzero constant"),
            self.powers.iter().map(|(b, x)| (b.clone(), x.scale(e))).collect(),
            self.sign.scale(e),
            self.rational.pow(e),
            self.factorials.iter().map(|(k, x)| (k.clone(), x * e)).collect(),
        )
        .expect("power of a nonzero term")
    }

    pub fn recip(&self) -> HypergeometricTerm {
        self.pow(-1)
    }

    pub fn div(&self, other: &HypergeometricTerm) -> HypergeometricTerm {
        self.mul(&other.recip())
    }

    pub fn scale(&self, c: &Rational) -> Result<HypergeometricTerm> {
        if c.is_zero() {
            return Err(Error::Term("term is identically zero".into()));
        }
        let mut t = self.clone();
        t.constant *= c;
        Ok(t)
    }

    pub fn neg(&self) -> HypergeometricTerm {
        let mut t = self.clone();
        t.constant = -t.constant;
        t
    }

    pub fn mul_ratfun(&self, r: &RationalFunction) -> Result<HypergeometricTerm> {
        if r.is_zero() {
            return Err(Error::Term("term is identically zero".into()));
        }
        Ok(self.mul(&HypergeometricTerm::from_ratfun(r.clone())?))
    }

    /// `t(var + i) / t(var)` as a reduced rational function.
    pub fn shift_quotient(&self, var: &Symbol, i: i64) -> RationalFunction {
        if i == 0 {
            return RationalFunction::one();
        }
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for (b, e) in &self.powers {
            poly_pow_signed(b, e.coeff(var) * i, &mut num, &mut den);
        }
        if (self.sign.coeff(var) * i).rem_euclid(2) == 1 {
            num = -num;
        }
        if self.rational.contains_var(var) {
            let (rn, rd) = (self.rational.numer(), self.rational.denom());
            num = &num * &(&rn.shift(var, i) * rd);
            den = &den * &(&rd.shift(var, i) * rn);
        }
        for ((arg, _), e) in &self.factorials {
            let m = arg.coeff(var) * i;
            if m == 0 {
                continue;
            }
            let mut p = Polynomial::one();
            if m > 0 {
                for j in 1..=m {
                    p = &p * &arg.add_constant(j).to_poly();
                }
                poly_pow_signed(&p, *e, &mut num, &mut den);
            } else {
                for j in 0..-m {
                    p = &p * &arg.add_constant(-j).to_poly();
                }
                poly_pow_signed(&p, -*e, &mut num, &mut den);
            }
        }
        RationalFunction::new(num, den)
    }

    /// `t(var + 1) / t(var)`.
    pub fn ratio(&self, var: &Symbol) -> RationalFunction {
        self.shift_quotient(var, 1)
    }

    /// Exact value at an integer point. Every symbol must be assigned.
    ///
    /// `1/m!` is zero for negative `m`. More generally the poles of numerator
    /// factorials and the zeros of reciprocal factorials and of the rational
    /// part are counted: the value is zero when zeros outnumber poles and
    /// `Undefined` when poles remain or the two balance.
    pub fn evaluate(&self, values: &BTreeMap<Symbol, i64>) -> Result<Evaluation> {
        let missing = |s: &dyn std::fmt::Display| Error::Term(format!("no value for symbol in {}", s));
        let rvalues: BTreeMap<Symbol, Rational> = values
            .iter()
            .map(|(s, v)| (s.clone(), Rational::from_integer(BigInt::from(*v))))
            .collect();
        // Poles of numerator factorials and zeros of reciprocal ones are
        // counted with multiplicity; the term vanishes when zeros win.
        let mut order: i64 = 0;
        let mut singular = false;
        let mut undefined = false;
        let mut zero = false;
        let mut acc = self.constant.clone();
        for ((arg, _), e) in &self.factorials {
            let m = arg.eval(values).ok_or_else(|| missing(arg))?;
            if m >= 0 {
                let f = Rational::from_integer(factorial(m as u64));
                acc *= pow_rational(&f, *e).expect("nonzero");
            } else {
                order -= e;
                singular = true;
            }
        }
        let num = self.rational.numer().eval(&rvalues).ok_or_else(|| missing(self.rational.numer()))?;
        let den = self.rational.denom().eval(&rvalues).ok_or_else(|| missing(self.rational.denom()))?;
        if num.is_zero() {
            order += vanishing_order(self.rational.numer(), values);
            singular = true;
        }
        if den.is_zero() {
            order -= vanishing_order(self.rational.denom(), values);
            singular = true;
        } else if !num.is_zero() {
            acc *= num / den;
        }
        for (b, e) in &self.powers {
            let bv = b.eval(&rvalues).ok_or_else(|| missing(b))?;
            let ev = e.eval(values).ok_or_else(|| missing(e))?;
            match pow_rational(&bv, ev) {
                Some(v) if v.is_zero() => zero = true,
                Some(v) => acc *= v,
                None => undefined = true,
            }
        }
        let s = self.sign.eval(values).ok_or_else(|| missing(&self.sign))?;
        if s.rem_euclid(2) == 1 {
            acc = -acc;
        }
        Ok(if undefined || order < 0 || (singular && order == 0) {
            Evaluation::Undefined
        } else if zero || order > 0 {
            Evaluation::Value(Rational::zero())
        } else {
            Evaluation::Value(acc)
        })
    }

    /// Replaces selected factors `(L)!^e` by `(-1)^(L e) / (-L-1)!^e`.
    pub fn shadow(&self, selection: &ShadowSelection) -> Result<HypergeometricTerm> {
        let keys: Vec<(LinearForm, bool)> = match selection {
            ShadowSelection::None => Vec::new(),
            ShadowSelection::Default => self
                .factorials
                .keys()
                .filter(|(a, _)| a.coeff(&Symbol::n()) + a.coeff(&Symbol::k()) != 0)
                .cloned()
                .collect(),
            ShadowSelection::Explicit(list) => {
                let mut out = Vec::new();
                for l in list {
                    let key = self
                        .factorials
                        .keys()
                        .find(|(a, _)| a == l)
                        .ok_or_else(|| Error::Term(format!("no factor ({})! to shadow", l)))?;
                    if !out.contains(key) {
                        out.push(key.clone());
                    }
                }
                out
            }
        };
        let mut factorials = self.factorials.clone();
        let mut sign = self.sign.clone();
        for key in keys {
            let e = factorials.remove(&key).expect("selected factor present");
            let (arg, shadowed) = key;
            let plain = if shadowed { arg.add_constant(1) } else { arg.clone() };
            sign = &sign + &plain.scale(e);
            bump(&mut factorials, ((&(-&arg)).add_constant(-1), !shadowed), -e);
        }
        HypergeometricTerm::raw(
            self.constant.clone(),
            self.powers.clone(),
            sign,
            self.rational.clone(),
            factorials,
        )
    }

    /// Composes every part of the term with a simultaneous integer-affine
    /// substitution.
    pub fn affine_substitute(&self, map: &BTreeMap<Symbol, LinearForm>) -> Result<HypergeometricTerm> {
        let poly_map: BTreeMap<Symbol, Polynomial> =
            map.iter().map(|(s, l)| (s.clone(), l.to_poly())).collect();
        let mut t = HypergeometricTerm::raw(
            self.constant.clone(),
            BTreeMap::new(),
            self.sign.substitute(map),
            self.rational.substitute_all(&poly_map),
            self.factorials
                .iter()
                .fold(BTreeMap::new(), |mut m, ((a, s), e)| {
                    bump(&mut m, (a.substitute(map), *s), *e);
                    m
                }),
        )?;
        for (b, e) in &self.powers {
            t = t.mul(&HypergeometricTerm::power(b.substitute_all(&poly_map), e.substitute(map))?);
        }
        Ok(t)
    }

    /// Replaces `var` by `var + amount`.
    pub fn shift(&self, var: &Symbol, amount: i64) -> Result<HypergeometricTerm> {
        let map = BTreeMap::from([(var.clone(), LinearForm::var(var.clone()).add_constant(amount))]);
        self.affine_substitute(&map)
    }

    /// The factor free of `var` made of the constant, sign, powers and the
    /// rational part's content in `var`. Factorials are left out.
    pub fn free_part(&self, var: &Symbol) -> HypergeometricTerm {
        let drop = |l: &LinearForm| l - &LinearForm::new([(var.clone(), l.coeff(var))], 0);
        let rational = RationalFunction::new(
            content_in(self.rational.numer(), var),
            content_in(self.rational.denom(), var),
        );
        HypergeometricTerm::raw(
            self.constant.clone(),
            self.powers.iter().map(|(b, e)| (b.clone(), drop(e))).collect(),
            drop(&self.sign),
            rational,
            BTreeMap::new(),
        )
        .expect("factor of a valid term")
    }

    /// Clears every shadow flag.
    pub fn unflag(&self) -> HypergeometricTerm {
        let mut factorials = BTreeMap::new();
        for ((a, _), e) in &self.factorials {
            bump(&mut factorials, (a.clone(), false), *e);
        }
        HypergeometricTerm {
            factorials,
            ..self.clone()
        }
    }

    /// The term as a rational function, when its factorials cancel up to
    /// integer shifts and no symbolic power or sign remains.
    pub fn to_ratfun(&self) -> Option<RationalFunction> {
        if !self.powers.is_empty() || !self.sign.is_zero() {
            return None;
        }
        let mut classes: BTreeMap<(LinearForm, bool), Vec<(i64, i64)>> = BTreeMap::new();
        for ((arg, sh), e) in &self.factorials {
            classes
                .entry((arg.homogeneous(), *sh))
                .or_default()
                .push((arg.constant_term(), *e));
        }
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for ((h, _), members) in classes {
            if members.iter().map(|(_, e)| e).sum::<i64>() != 0 {
                return None;
            }
            let low = members.iter().map(|(c, _)| *c).min().expect("nonempty");
            for (c, e) in members {
                // (h + c)! = (h + low)! * prod_{j = low+1}^{c} (h + j)
                let mut p = Polynomial::one();
                for j in low + 1..=c {
                    p = &p * &h.add_constant(j).to_poly();
                }
                poly_pow_signed(&p, e, &mut num, &mut den);
            }
        }
        let r = RationalFunction::new(num, den);
        Some((&r * &self.rational).scale(&self.constant))
    }

    /// Folds linear factors of the rational part into adjacent factorials:
    /// `(L+1)^e L!^e = (L+1)!^e` and `L^e / L!^e = 1/(L-1)!^e`, and their
    /// reciprocals.
    pub fn absorb_linear_factors(&self) -> HypergeometricTerm {
        let mut num = self.rational.numer().clone();
        let mut den = self.rational.denom().clone();
        let mut factorials = self.factorials.clone();
        loop {
            let mut changed = false;
            let keys: Vec<_> = factorials.iter().map(|(k, e)| (k.clone(), *e)).collect();
            for ((arg, sh), e) in keys {
                let m = e.unsigned_abs() as u32;
                let up = arg.add_constant(1).to_poly().pow(m);
                let at = arg.to_poly().pow(m);
                let (grow_from, shrink_from) = if e > 0 { (&mut num, &mut den) } else { (&mut den, &mut num) };
                if let Some(q) = grow_from.div_exact(&up) {
                    *grow_from = q;
                    factorials.remove(&(arg.clone(), sh));
                    bump(&mut factorials, (arg.add_constant(1), sh), e);
                    changed = true;
                    break;
                }
                if let Some(q) = shrink_from.div_exact(&at) {
                    *shrink_from = q;
                    factorials.remove(&(arg.clone(), sh));
                    bump(&mut factorials, (arg.add_constant(-1), sh), e);
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        HypergeometricTerm::raw(
            self.constant.clone(),
            self.powers.clone(),
            self.sign.clone(),
            RationalFunction::new(num, den),
            factorials,
        )
        .unwrap_or_else(|_| self.clone())
    }
}

impl std::fmt::Debug for HypergeometricTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}
