//! Creative telescoping by Zeilberger's fast algorithm.
//!
//! Certificates follow the forward convention
//! `S(N, n) F(n, k) = G(n, k+1) - G(n, k)` with `G = R F`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::gcd::{poly_gcd, poly_lcm};
use crate::algebra::linsolve::nullspace;
use crate::algebra::rational::{rat, rational_content};
use crate::algebra::roots::integer_roots;
use crate::algebra::{Polynomial, Rational, RationalFunction, Symbol};
use crate::error::{Error, Result};
use crate::gosper::{decompose, degree_bound_for};
use crate::parse::parse_polynomial;
use crate::term::{HypergeometricTerm, LinearForm};

pub const DEFAULT_MAX_ORDER: usize = 6;

/// `S(N, n) = sum_i s_i(n) N^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct RecurrenceOperator {
    var: Symbol,
    coefficients: Vec<Polynomial>,
}

impl RecurrenceOperator {
    /// Normalizes to jointly primitive coefficients with a positive leading
    /// coefficient in the top one. Trailing zero coefficients are dropped.
    pub fn new(var: Symbol, coefficients: Vec<Polynomial>) -> Result<Self> {
        let (op, _) = RecurrenceOperator::normalized(var, coefficients)?;
        Ok(op)
    }

    /// Keeps the coefficients as given, apart from trailing zeros.
    pub fn unnormalized(var: Symbol, mut coefficients: Vec<Polynomial>) -> Result<Self> {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            return Err(Error::Degenerate("zero recurrence operator".into()));
        }
        Ok(RecurrenceOperator { var, coefficients })
    }

    /// Like [`RecurrenceOperator::new`], also returning the polynomial the
    /// input was divided by.
    pub fn normalized(var: Symbol, mut coefficients: Vec<Polynomial>) -> Result<(Self, RationalFunction)> {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            return Err(Error::Degenerate("zero recurrence operator".into()));
        }
        let g = coefficients.iter().fold(Polynomial::zero(), |g, c| poly_gcd(&g, c));
        let mut cs: Vec<Polynomial> = coefficients
            .iter()
            .map(|c| c.div_exact(&g).expect("gcd divides"))
            .collect();
        let content = rational_content(cs.iter().flat_map(|c| c.terms().map(|(_, v)| v)));
        let mut scale = content;
        if cs.last().unwrap().leading_coefficient().is_negative() {
            scale = -scale;
        }
        let inv = scale.recip();
        cs = cs.iter().map(|c| c.scale(&inv)).collect();
        let divisor = RationalFunction::from_poly(g.scale(&scale));
        Ok((RecurrenceOperator { var, coefficients: cs }, divisor))
    }

    /// Parses coefficient texts `s_0, ..., s_I` without normalizing.
    pub fn parse(var: Symbol, texts: &[impl AsRef<str>]) -> Result<Self> {
        let cs = texts
            .iter()
            .map(|t| parse_polynomial(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        RecurrenceOperator::unnormalized(var, cs)
    }

    pub fn var(&self) -> &Symbol {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    /// `S F / F` as a rational function.
    pub fn apply(&self, f: &HypergeometricTerm) -> RationalFunction {
        self.coefficients
            .iter()
            .enumerate()
            .fold(RationalFunction::zero(), |acc, (i, s)| {
                &acc + &f.shift_quotient(&self.var, i as i64).mul_poly(s)
            })
    }

    /// `sum_i s_i(n) a(n + i)` at `n`, with `values[i] = a(n + i)` and the
    /// remaining symbols bound by `params`.
    pub fn residual(&self, n: i64, values: &[Rational], params: &BTreeMap<Symbol, Rational>) -> Option<Rational> {
        let mut at = params.clone();
        at.insert(self.var.clone(), Rational::from_integer(n.into()));
        let mut acc = Rational::zero();
        for (i, s) in self.coefficients.iter().enumerate() {
            let v = values.get(i)?;
            let c = s.eval(&at)?;
            acc += c * v;
        }
        Some(acc)
    }
}

impl fmt::Display for RecurrenceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let shift = match i {
                0 => String::new(),
                1 => "N".to_string(),
                _ => format!("N^{}", i),
            };
            let negative = c.leading_coefficient().is_negative();
            let body = if negative { -c } else { c.clone() };
            if shift.is_empty() {
                let text = c.to_string();
                match (first, text.strip_prefix('-')) {
                    (true, _) => f.write_str(&text)?,
                    (false, Some(rest)) => write!(f, " - {}", rest)?,
                    (false, None) => write!(f, " + {}", text)?,
                }
                first = false;
                continue;
            }
            let text = if body.is_one() {
                shift
            } else if body.len() > 1 {
                format!("({})*{}", body, shift)
            } else {
                format!("{}*{}", body, shift)
            };
            match (first, negative) {
                (true, true) => write!(f, "-{}", text)?,
                (true, false) => write!(f, "{}", text)?,
                (false, true) => write!(f, " - {}", text)?,
                (false, false) => write!(f, " + {}", text)?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for RecurrenceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// An operator with its rational certificate `R = G / F`.
#[derive(Clone, Debug, PartialEq)]
pub struct TelescopeCertificate {
    pub sumvar: Symbol,
    pub operator: RecurrenceOperator,
    pub certificate: RationalFunction,
}

impl TelescopeCertificate {
    pub fn recvar(&self) -> &Symbol {
        self.operator.var()
    }
}

/// Searches orders `0..=max_order` for a telescoping recurrence of `F`.
pub fn creative_telescope(
    f: &HypergeometricTerm,
    sumvar: &Symbol,
    recvar: &Symbol,
    max_order: usize,
) -> Result<TelescopeCertificate> {
    if sumvar == recvar {
        return Err(Error::Degenerate("summation and recurrence variables coincide".into()));
    }
    for order in 0..=max_order {
        if let Some(cert) = try_order(f, sumvar, recvar, order)? {
            if !verify_certificate(f, &cert) {
                return Err(Error::Algebra(format!(
                    "certificate for {} failed its own check at order {}",
                    f, order
                )));
            }
            return Ok(cert);
        }
    }
    Err(Error::OrderExhausted { max_order })
}

fn try_order(
    f: &HypergeometricTerm,
    k: &Symbol,
    n: &Symbol,
    order: usize,
) -> Result<Option<TelescopeCertificate>> {
    let shifts: Vec<RationalFunction> = (0..=order).map(|i| f.shift_quotient(n, i as i64)).collect();
    let v = shifts.iter().fold(Polynomial::one(), |l, s| poly_lcm(&l, s.denom()));
    let c: Vec<Polynomial> = shifts
        .iter()
        .map(|s| s.numer() * &v.div_exact(s.denom()).expect("lcm is a multiple"))
        .collect();

    let rho_k = f.ratio(k);
    let rho = &(&rho_k.shift(k, -1) * &RationalFunction::from_poly(v.shift(k, -1)))
        / &RationalFunction::from_poly(v.clone());
    let d = decompose(&rho, &Polynomial::one(), k)?;
    let deg_c = c.iter().map(|p| p.deg(k)).max().unwrap_or(0);
    let degree = degree_bound_for(&d.q, &d.r, d.p.deg(k) + deg_c, k).unwrap_or(-1);

    let kp = Polynomial::var(k.clone());
    let q1 = d.q.shift(k, 1);
    let mut columns: Vec<Polynomial> = (0..=degree)
        .map(|j| &(&q1 * &kp.pow(j as u32)) - &(&d.r * &kp.shift(k, -1).pow(j as u32)))
        .collect();
    let nf = columns.len();
    columns.extend(c.iter().map(|ci| -&(&d.p * ci)));
    let rows = columns.iter().map(|p| p.deg(k)).max().unwrap_or(0).max(0) as u32;
    let a: Vec<Vec<Polynomial>> = (0..=rows)
        .map(|j| columns.iter().map(|p| p.coefficient_of(k, j)).collect())
        .collect();

    let best = nullspace(&a, columns.len())
        .into_iter()
        .filter_map(|x| {
            let top = (nf..x.len()).rev().find(|&i| !x[i].is_zero())?;
            Some((top, x))
        })
        .min_by_key(|(top, _)| *top);
    let Some((_, x)) = best else {
        return Ok(None);
    };

    let fpoly = x[..nf]
        .iter()
        .enumerate()
        .fold(Polynomial::zero(), |acc, (j, fj)| &acc + &(fj * &kp.pow(j as u32)));
    let s: Vec<Polynomial> = x[nf..].to_vec();
    let (operator, divisor) = RecurrenceOperator::normalized(n.clone(), s)?;
    // R(k) = q(k) f(k-1) / (p(k-1) V(k-1) rho_K(k-1))
    let certificate = if fpoly.is_zero() {
        RationalFunction::zero()
    } else {
        let num = &d.q * &fpoly.shift(k, -1);
        let den = &d.p.shift(k, -1) * &v.shift(k, -1);
        let r = &RationalFunction::new(num, den) / &rho_k.shift(k, -1);
        &r / &divisor
    };
    Ok(Some(TelescopeCertificate {
        sumvar: k.clone(),
        operator,
        certificate,
    }))
}

/// Checks `sum_i s_i F(n+i,k)/F(n,k) = R(n,k+1) F(n,k+1)/F(n,k) - R(n,k)`.
pub fn verify_certificate(f: &HypergeometricTerm, cert: &TelescopeCertificate) -> bool {
    let k = &cert.sumvar;
    let lhs = cert.operator.apply(f);
    let r = &cert.certificate;
    let rhs = &(&r.shift(k, 1) * &f.ratio(k)) - r;
    lhs == rhs
}

/// Closed form of a first-order recurrence solution.
#[derive(Clone, Debug, PartialEq)]
pub enum FirstOrderSolution {
    Term(HypergeometricTerm),
    /// `initial * prod_{m=start}^{var-1} ratio(m)` where the ratio does not
    /// split into integer-linear factors.
    Product {
        initial: HypergeometricTerm,
        start: i64,
        ratio: RationalFunction,
    },
}

/// Solves `s_1(n) a(n+1) + s_0(n) a(n) = 0` from `a(start) = initial`.
pub fn solve_first_order(
    op: &RecurrenceOperator,
    initial: &HypergeometricTerm,
    start: i64,
) -> Result<FirstOrderSolution> {
    if op.order() != 1 {
        return Err(Error::Degenerate(format!("operator {} is not of order 1", op)));
    }
    let n = op.var();
    if initial.depends_on(n) {
        return Err(Error::Degenerate(format!("initial value {} depends on {}", initial, n)));
    }
    let (s0, s1) = (&op.coefficients()[0], &op.coefficients()[1]);
    if s1.is_univariate_in(n) || s1.is_constant() {
        for root in integer_roots(s1, n).unwrap_or_default() {
            if root >= BigInt::from(start) {
                return Err(Error::Degenerate(format!(
                    "leading coefficient {} vanishes at {} = {}",
                    s1, n, root
                )));
            }
        }
    }
    let ratio = RationalFunction::new(-s0, s1.clone());
    let product = || FirstOrderSolution::Product {
        initial: initial.clone(),
        start,
        ratio: ratio.clone(),
    };
    let (Some(top), Some(bottom)) = (linear_factors(ratio.numer(), n), linear_factors(ratio.denom(), n))
    else {
        return Ok(product());
    };
    let steps = LinearForm::var(n.clone()).add_constant(-start);
    let mut out = initial.clone();
    for (split, e) in [(top, 1), (bottom, -1)] {
        let (c, rest, factors) = split;
        let mut piece = HypergeometricTerm::power(Polynomial::constant(c), steps.clone())?;
        if !rest.is_constant() {
            piece = piece.mul(&HypergeometricTerm::power(rest, steps.clone())?);
        }
        for (alpha, beta) in factors {
            let Some(p) = factor_product(alpha, &beta, n, start)? else {
                return Ok(product());
            };
            piece = piece.mul(&p);
        }
        out = out.mul(&piece.pow(e));
    }
    Ok(FirstOrderSolution::Term(out))
}

/// `prod_{m=start}^{n-1} (alpha m + beta)`.
fn factor_product(alpha: i64, beta: &LinearForm, n: &Symbol, start: i64) -> Result<Option<HypergeometricTerm>> {
    let (alpha, beta, sign) = if alpha < 0 { (-alpha, -beta, -1) } else { (alpha, beta.clone(), 1) };
    if beta.constant_term() % alpha != 0 || beta.coeffs().values().any(|c| c % alpha != 0) {
        return Ok(None);
    }
    let gamma = LinearForm::new(
        beta.coeffs().iter().map(|(s, c)| (s.clone(), c / alpha)),
        beta.constant_term() / alpha,
    );
    let steps = LinearForm::var(n.clone()).add_constant(-start);
    let top = (&gamma + &LinearForm::var(n.clone())).add_constant(-1);
    let bottom = gamma.add_constant(start - 1);
    if bottom.as_constant().is_some_and(|b| b < 0) {
        return Err(Error::Degenerate(format!(
            "factor {}*m + {} vanishes inside the product range",
            alpha, beta
        )));
    }
    let mut t = HypergeometricTerm::factorial(top, 1, false)?
        .div(&HypergeometricTerm::factorial(bottom, 1, false)?);
    t = t.mul(&HypergeometricTerm::power(Polynomial::from_int(sign * alpha), steps)?);
    Ok(Some(t))
}

type LinearSplit = (Rational, Polynomial, Vec<(i64, LinearForm)>);

/// Writes `p = c * rest * prod (alpha_i var + beta_i)` with `rest` free of
/// `var` and primitive, or `None` when a factor is not integer-linear.
fn linear_factors(p: &Polynomial, var: &Symbol) -> Option<LinearSplit> {
    let mut p = p.clone();
    let mut out = Vec::new();
    while p.deg(var) > 0 {
        let (alpha, beta) = find_linear_factor(&p, var)?;
        let factor = &Polynomial::var(var.clone()).scale(&rat(alpha)) + &beta.to_poly();
        p = p.div_exact(&factor)?;
        out.push((alpha, beta));
    }
    let c = p.content();
    let rest = p.scale(&c.recip());
    Some((c, rest, out))
}

fn find_linear_factor(p: &Polynomial, var: &Symbol) -> Option<(i64, LinearForm)> {
    let params: Vec<Symbol> = p.vars().into_iter().filter(|s| s != var).collect();
    let zero_all = |p: &Polynomial| params.iter().fold(p.clone(), |acc, s| acc.substitute(s, &Polynomial::zero()));
    let base = zero_all(p);
    if base.deg(var) != p.deg(var) {
        return None;
    }
    for (alpha, gamma) in rational_linear_roots(&base, var)? {
        let mut choices: Vec<Vec<(Symbol, i64)>> = vec![Vec::new()];
        for s in &params {
            let others: Vec<&Symbol> = params.iter().filter(|o| *o != s).collect();
            let slice = others.iter().fold(p.clone(), |acc, o| acc.substitute(o, &Polynomial::zero()));
            let ls = param_coefficients(&slice, var, s, alpha, gamma)?;
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    ls.iter().map(move |l| {
                        let mut c = c.clone();
                        c.push((s.clone(), *l));
                        c
                    })
                })
                .collect();
        }
        for c in choices {
            let beta = LinearForm::new(c, gamma);
            let factor = &Polynomial::var(var.clone()).scale(&rat(alpha)) + &beta.to_poly();
            if p.div_exact(&factor).is_some() {
                return Some((alpha, beta));
            }
        }
    }
    None
}

/// Factors `alpha var + gamma` of a univariate polynomial with integer
/// `alpha > 0` and `gamma`.
fn rational_linear_roots(p: &Polynomial, var: &Symbol) -> Option<Vec<(i64, i64)>> {
    let prim = p.primitive();
    let a = prim.leading_coefficient_in(var).constant_value()?;
    let d = prim.deg(var);
    // a^(d-1) p(m / a) is monic with integer roots m = a * root.
    let m = Polynomial::var(var.clone()).scale(&a.recip());
    let monic = prim.substitute(var, &m).scale(&a.pow(d as i32 - 1));
    let roots = integer_roots(&monic, var).ok()?;
    let mut out = Vec::new();
    for r in roots {
        let root = Rational::new(r, a.to_integer());
        let alpha = root.denom().to_i64()?;
        let gamma = (-root.numer()).to_i64()?;
        out.push((alpha, gamma));
    }
    Some(out)
}

/// Integers `l` with `alpha var + gamma + l s` dividing `p(var, s)`.
fn param_coefficients(p: &Polynomial, var: &Symbol, s: &Symbol, alpha: i64, gamma: i64) -> Option<Vec<i64>> {
    if !p.contains_var(s) {
        return Some(vec![0]);
    }
    let l = Symbol::new("#l");
    let sp = Polynomial::var(s.clone());
    let root = (&(&Polynomial::from_int(-gamma) - &(&Polynomial::var(l.clone()) * &sp)))
        .scale(&Rational::new(BigInt::one(), BigInt::from(alpha)));
    let at = p.substitute(var, &root);
    let coeffs: Vec<Polynomial> = at.coefficients_in(s).into_iter().filter(|c| !c.is_zero()).collect();
    let Some(probe) = coeffs.iter().min_by_key(|c| c.deg(&l)) else {
        return Some(vec![0]);
    };
    if probe.deg(&l) <= 0 {
        return Some(Vec::new());
    }
    let ls = integer_roots(probe, &l).ok()?;
    Some(
        ls.into_iter()
            .filter(|v| {
                let vp = Polynomial::constant(Rational::from_integer(v.clone()));
                coeffs.iter().all(|c| c.substitute(&l, &vp).is_zero())
            })
            .filter_map(|v| v.to_i64())
            .collect(),
    )
}
