//! The operator algebra `C<n,k,N,K>` with `Nn = (n+1)N` and `Kk = (k+1)K`.
//!
//! Operators are kept in coefficient-left normal form `sum c(n,k) N^a K^b`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::algebra::linsolve::nullspace;
use crate::algebra::{Polynomial, RationalFunction, Symbol};
use crate::error::{Error, ParseError, Result};
use crate::parse::{parse_expr, Expr, ExprKind};
use crate::term::HypergeometricTerm;
use crate::zeilberger::RecurrenceOperator;

/// Sum of `c(n,k) N^a K^b`, keyed by `(a, b)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OreOperator {
    terms: BTreeMap<(u32, u32), Polynomial>,
}

impl OreOperator {
    pub fn zero() -> Self {
        OreOperator::default()
    }

    pub fn one() -> Self {
        OreOperator::monomial(Polynomial::one(), 0, 0)
    }

    /// `c N^a K^b`.
    pub fn monomial(c: Polynomial, a: u32, b: u32) -> Self {
        let mut out = OreOperator::zero();
        out.add_term((a, b), c);
        out
    }

    pub fn from_poly(c: Polynomial) -> Self {
        OreOperator::monomial(c, 0, 0)
    }

    pub fn shift_n() -> Self {
        OreOperator::monomial(Polynomial::one(), 1, 0)
    }

    pub fn shift_k() -> Self {
        OreOperator::monomial(Polynomial::one(), 0, 1)
    }

    fn add_term(&mut self, key: (u32, u32), c: Polynomial) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Polynomial::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Polynomial)> {
        self.terms.iter().map(|((a, b), c)| (*a, *b, c))
    }

    pub fn coefficient(&self, a: u32, b: u32) -> Polynomial {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn degree_n(&self) -> Option<u32> {
        self.terms.keys().map(|(a, _)| *a).max()
    }

    pub fn degree_k(&self) -> Option<u32> {
        self.terms.keys().map(|(_, b)| *b).max()
    }

    /// `true` when neither `K` nor `k` occurs.
    pub fn is_recurrence(&self) -> bool {
        let k = Symbol::k();
        self.terms.iter().all(|((_, b), c)| *b == 0 && !c.contains_var(&k))
    }

    /// Left multiplication by a polynomial.
    pub fn scale_left(&self, c: &Polynomial) -> Self {
        let mut out = OreOperator::zero();
        for (key, v) in &self.terms {
            out.add_term(*key, c * v);
        }
        out
    }

    pub fn multiply(&self, other: &OreOperator) -> OreOperator {
        let (n, k) = (Symbol::n(), Symbol::k());
        let mut out = OreOperator::zero();
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                let moved = c2.shift(&n, *a as i64).shift(&k, *b as i64);
                out.add_term((a + c, b + d), c1 * &moved);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> OreOperator {
        (0..e).fold(OreOperator::one(), |acc, _| acc.multiply(self))
    }

    /// `(A F) / F` for a term `F` in `n` and `k`.
    pub fn apply(&self, f: &HypergeometricTerm) -> RationalFunction {
        let (n, k) = (Symbol::n(), Symbol::k());
        let mut out = RationalFunction::zero();
        for ((a, b), c) in &self.terms {
            let along_n = f.shift_quotient(&n, *a as i64);
            let along_k = f.shift_quotient(&k, *b as i64).shift(&n, *a as i64);
            out = &out + &(&along_n * &along_k).mul_poly(c);
        }
        out
    }

    /// Splits `R = S + (K - 1) Rbar` with `S` free of `K`.
    pub fn reduce_mod_delta(&self) -> (OreOperator, OreOperator) {
        let k = Symbol::k();
        let mut s = OreOperator::zero();
        let mut rbar = OreOperator::zero();
        for ((a, b), c) in &self.terms {
            // c(n,k) N^a K^b = K^b c(n,k-b) N^a, and K^b - 1 = (K-1)(K^(b-1) + ... + 1).
            let base = c.shift(&k, -(*b as i64));
            s.add_term((*a, 0), base.clone());
            for j in 0..*b {
                rbar.add_term((*a, j), base.shift(&k, j as i64));
            }
        }
        (s, rbar)
    }

    /// Parses an operator such as `(n-k+1)*N - (n+1)`; products keep their
    /// written order.
    pub fn parse(text: &str) -> Result<OreOperator> {
        Ok(from_expr(&parse_expr(text)?)?)
    }

    pub fn from_recurrence(op: &RecurrenceOperator) -> OreOperator {
        let mut out = OreOperator::zero();
        for (i, c) in op.coefficients().iter().enumerate() {
            out.add_term((i as u32, 0), c.clone());
        }
        out
    }
}

fn from_expr(e: &Expr) -> Result<OreOperator, ParseError> {
    let err = |message: String| ParseError { position: e.pos, message };
    Ok(match &e.kind {
        ExprKind::Sym(s) if s == "N" => OreOperator::shift_n(),
        ExprKind::Sym(s) if s == "K" => OreOperator::shift_k(),
        ExprKind::Num(_) | ExprKind::Sym(_) => OreOperator::from_poly(e.to_poly()?),
        ExprKind::Add(a, b) => &from_expr(a)? + &from_expr(b)?,
        ExprKind::Sub(a, b) => &from_expr(a)? - &from_expr(b)?,
        ExprKind::Neg(a) => -&from_expr(a)?,
        ExprKind::Mul(a, b) => from_expr(a)?.multiply(&from_expr(b)?),
        ExprKind::Div(a, b) => {
            let d = b.to_ratfun()?;
            let c = d
                .constant_value()
                .filter(|c| !c.is_zero())
                .ok_or_else(|| err("operators may only be divided by nonzero constants".into()))?;
            from_expr(a)?.scale_left(&Polynomial::constant(c.recip()))
        }
        ExprKind::Pow(a, b) => {
            let p = b.to_integer()?;
            if p < 0 {
                return Err(err("negative powers of operators are not supported".into()));
            }
            from_expr(a)?.pow(p as u32)
        }
        ExprKind::Fact(_) | ExprKind::Call(..) => {
            return Err(err("factorials and functions are not allowed in operators".into()))
        }
    })
}

impl Add for &OreOperator {
    type Output = OreOperator;
    fn add(self, rhs: &OreOperator) -> OreOperator {
        let mut out = self.clone();
        for (key, c) in &rhs.terms {
            out.add_term(*key, c.clone());
        }
        out
    }
}

impl Sub for &OreOperator {
    type Output = OreOperator;
    fn sub(self, rhs: &OreOperator) -> OreOperator {
        self + &(-rhs)
    }
}

impl Neg for &OreOperator {
    type Output = OreOperator;
    fn neg(self) -> OreOperator {
        OreOperator {
            terms: self.terms.iter().map(|(key, c)| (*key, -c)).collect(),
        }
    }
}

impl Mul for &OreOperator {
    type Output = OreOperator;
    fn mul(self, rhs: &OreOperator) -> OreOperator {
        self.multiply(rhs)
    }
}

fn shift_text(a: u32, b: u32) -> String {
    let one = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{}^{}", name, e)),
    };
    [one("N", a), one("K", b)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

fn write_signed(f: &mut fmt::Formatter<'_>, first: bool, text: &str) -> fmt::Result {
    match (first, text.strip_prefix('-')) {
        (true, _) => f.write_str(text),
        (false, Some(rest)) => write!(f, " - {}", rest),
        (false, None) => write!(f, " + {}", text),
    }
}

fn term_text(coefficient: String, multi: bool, shift: &str) -> String {
    if shift.is_empty() {
        return coefficient;
    }
    let (sign, body) = match coefficient.strip_prefix('-') {
        Some(rest) if !multi => ("-", rest.to_string()),
        _ => ("", coefficient),
    };
    match (body.as_str(), multi) {
        ("1", _) => format!("{}{}", sign, shift),
        (_, true) => format!("({})*{}", body, shift),
        _ => format!("{}{}*{}", sign, body, shift),
    }
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let text = term_text(c.to_string(), c.len() > 1, &shift_text(*a, *b));
            write_signed(f, i == 0, &text)?;
        }
        Ok(())
    }
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Degree limits for the cofactors `A` and `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bounds {
    pub k: u32,
    pub shift_n: u32,
    pub shift_k: u32,
}

impl Bounds {
    pub const DEFAULT: Bounds = Bounds { k: 2, shift_n: 1, shift_k: 1 };

    fn doubled(self) -> Bounds {
        Bounds {
            k: 2 * self.k,
            shift_n: 2 * self.shift_n,
            shift_k: 2 * self.shift_k,
        }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg_k <= {}, deg_N <= {}, deg_K <= {}", self.k, self.shift_n, self.shift_k)
    }
}

/// `A P + B Q = S + (K - 1) Rbar` with `S` free of `K` and `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EliminationResult {
    pub s: OreOperator,
    pub a: OreOperator,
    pub b: OreOperator,
    pub rbar: OreOperator,
    pub bounds: Bounds,
}

impl EliminationResult {
    pub fn check(&self, p: &OreOperator, q: &OreOperator) -> bool {
        let lhs = &self.a.multiply(p) + &self.b.multiply(q);
        let delta = &OreOperator::shift_k() - &OreOperator::one();
        let rhs = &self.s + &delta.multiply(&self.rbar);
        lhs == rhs && self.s.is_recurrence() && !self.s.is_zero()
    }
}

/// Searches cofactors within `bounds`, then within doubled bounds.
pub fn eliminate(p: &OreOperator, q: &OreOperator, bounds: Bounds) -> Result<EliminationResult> {
    let wide = bounds.doubled();
    let mut tried = Vec::new();
    for limit in [bounds, wide] {
        let mut shapes: Vec<Bounds> = Vec::new();
        for k in 0..=limit.k {
            for shift_n in 0..=limit.shift_n {
                for shift_k in 0..=limit.shift_k {
                    let b = Bounds { k, shift_n, shift_k };
                    if !tried.contains(&b) {
                        shapes.push(b);
                    }
                }
            }
        }
        shapes.sort_by_key(|b| (b.k + b.shift_n + b.shift_k, b.k, b.shift_k, b.shift_n));
        for shape in shapes {
            tried.push(shape);
            if let Some(r) = eliminate_within(p, q, shape) {
                return Ok(r);
            }
        }
    }
    Err(Error::BoundsExhausted(format!("{} and {}", bounds, wide)))
}

fn eliminate_within(p: &OreOperator, q: &OreOperator, shape: Bounds) -> Option<EliminationResult> {
    let k = Symbol::k();
    let mut basis = Vec::new();
    for i in 0..=shape.k {
        for a in 0..=shape.shift_n {
            for b in 0..=shape.shift_k {
                basis.push(OreOperator::monomial(Polynomial::var(k.clone()).pow(i), a, b));
            }
        }
    }
    let products: Vec<(OreOperator, OreOperator)> = basis
        .iter()
        .map(|m| m.multiply(p))
        .chain(basis.iter().map(|m| m.multiply(q)))
        .map(|x| x.reduce_mod_delta())
        .collect();

    let mut rows: BTreeMap<(u32, u32), Vec<Polynomial>> = BTreeMap::new();
    let ncols = products.len();
    for (j, (s, _)) in products.iter().enumerate() {
        for (a, _, c) in s.terms() {
            for (i, ci) in c.coefficients_in(&k).into_iter().enumerate().skip(1) {
                if ci.is_zero() {
                    continue;
                }
                rows.entry((a, i as u32)).or_insert_with(|| vec![Polynomial::zero(); ncols])[j] = ci;
            }
        }
    }
    let matrix: Vec<Vec<Polynomial>> = rows.into_values().collect();
    let combine = |x: &[Polynomial], pick: fn(&(OreOperator, OreOperator)) -> &OreOperator| {
        x.iter()
            .zip(&products)
            .fold(OreOperator::zero(), |acc, (u, pr)| &acc + &pick(pr).scale_left(u))
    };
    let candidates: Vec<Vec<Polynomial>> = if matrix.is_empty() {
        (0..ncols)
            .map(|j| (0..ncols).map(|i| if i == j { Polynomial::one() } else { Polynomial::zero() }).collect())
            .collect()
    } else {
        nullspace(&matrix, ncols)
    };
    let best = candidates
        .into_iter()
        .filter_map(|x| {
            let s = combine(&x, |pr| &pr.0);
            let order = s.degree_n()?;
            Some((order, x, s))
        })
        .min_by_key(|(order, _, _)| *order)?;
    let (_, mut x, mut s) = best;
    let top = s.coefficient(s.degree_n().unwrap_or(0), 0);
    if top.leading_coefficient().is_negative() {
        x = x.iter().map(|u| -u).collect();
        s = -&s;
    }
    let rbar = combine(&x, |pr| &pr.1);
    let half = basis.len();
    let cofactor = |xs: &[Polynomial]| {
        xs.iter()
            .zip(&basis)
            .fold(OreOperator::zero(), |acc, (u, m)| &acc + &m.scale_left(u))
    };
    Some(EliminationResult {
        a: cofactor(&x[..half]),
        b: cofactor(&x[half..]),
        s,
        rbar,
        bounds: shape,
    })
}

/// `sum c_i(n) N^i` with rational-function coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ShiftOperator {
    coefficients: Vec<RationalFunction>,
}

impl ShiftOperator {
    pub fn new(mut coefficients: Vec<RationalFunction>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        ShiftOperator { coefficients }
    }

    pub fn coefficients(&self) -> &[RationalFunction] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Reads a `K`- and `k`-free operator.
    pub fn from_ore(op: &OreOperator) -> Result<ShiftOperator> {
        if !op.is_recurrence() {
            return Err(Error::Degenerate(format!("{} involves K or k", op)));
        }
        let len = op.degree_n().map(|d| d as usize + 1).unwrap_or(0);
        let mut cs = vec![RationalFunction::zero(); len];
        for (a, _, c) in op.terms() {
            cs[a as usize] = RationalFunction::from_poly(c.clone());
        }
        Ok(ShiftOperator::new(cs))
    }

    pub fn multiply(&self, other: &ShiftOperator) -> ShiftOperator {
        let n = Symbol::n();
        if self.is_zero() || other.is_zero() {
            return ShiftOperator::new(Vec::new());
        }
        let mut cs = vec![RationalFunction::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                cs[i + j] = &cs[i + j] + &(a * &b.shift(&n, i as i64));
            }
        }
        ShiftOperator::new(cs)
    }

    fn sub(&self, other: &ShiftOperator) -> ShiftOperator {
        let len = self.coefficients.len().max(other.coefficients.len());
        let get = |v: &[RationalFunction], i: usize| v.get(i).cloned().unwrap_or_else(RationalFunction::zero);
        ShiftOperator::new(
            (0..len)
                .map(|i| &get(&self.coefficients, i) - &get(&other.coefficients, i))
                .collect(),
        )
    }

    pub fn add(&self, other: &ShiftOperator) -> ShiftOperator {
        self.sub(&ShiftOperator::new(Vec::new()).sub(other))
    }
}

impl fmt::Display for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let multi = c.numer().len() > 1 || !c.denom().is_one();
            let text = term_text(c.to_string(), multi, &shift_text(i as u32, 0));
            write_signed(f, first, &text)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `S = T S1 + remainder` with `ord(remainder) < ord(S1)`.
pub fn right_divide(s: &ShiftOperator, s1: &ShiftOperator) -> Result<(ShiftOperator, ShiftOperator)> {
    let n = Symbol::n();
    let e = s1
        .order()
        .ok_or_else(|| Error::Degenerate("division by the zero operator".into()))?;
    let lead = s1.coefficients[e].clone();
    let mut rem = s.clone();
    let mut quotient: Vec<RationalFunction> = Vec::new();
    while let Some(d) = rem.order().filter(|d| *d >= e) {
        let shift = d - e;
        let t = &rem.coefficients[d] / &lead.shift(&n, shift as i64);
        if quotient.len() <= shift {
            quotient.resize(shift + 1, RationalFunction::zero());
        }
        quotient[shift] = &quotient[shift] + &t;
        let mut mono = vec![RationalFunction::zero(); shift + 1];
        mono[shift] = t;
        rem = rem.sub(&ShiftOperator::new(mono).multiply(s1));
    }
    Ok((ShiftOperator::new(quotient), rem))
}

/// Checks `S = T S1 + remainder`.
pub fn check_division(s: &ShiftOperator, s1: &ShiftOperator, t: &ShiftOperator, rem: &ShiftOperator) -> bool {
    t.multiply(s1).add(rem) == *s
}

/// `true` when `S` is a left multiple of `S1`.
pub fn is_right_multiple(s: &ShiftOperator, s1: &ShiftOperator) -> Result<bool> {
    Ok(right_divide(s, s1)?.1.is_zero())
}
