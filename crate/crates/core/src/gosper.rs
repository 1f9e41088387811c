//! Gosper's decision procedure for indefinite hypergeometric summation.
//!
//! Antidifferences follow the backward convention `T(k) - T(k-1) = t(k)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::algebra::gcd::{poly_gcd, resultant};
use crate::algebra::roots::parametric_integer_roots;
use crate::algebra::{linear_solve, Polynomial, RationalFunction, Symbol};
use crate::error::{Error, Result};
use crate::term::HypergeometricTerm;

/// `a(k)/a(k-1) = (p(k)/p(k-1)) * (q(k)/r(k))` with `gcd(q(k), r(k+j)) = 1`
/// for every integer `j >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GosperDecomposition {
    pub var: Symbol,
    pub p: Polynomial,
    pub q: Polynomial,
    pub r: Polynomial,
}

/// A summable term's antidifference `T = multiplier * t`, with
/// `multiplier = q(k+1) f(k) / p(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Antidifference {
    pub decomposition: GosperDecomposition,
    /// Polynomial in the summation variable; coefficients may be rational in
    /// the other symbols.
    pub f: RationalFunction,
    pub multiplier: RationalFunction,
    pub term: HypergeometricTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GosperResult {
    Summable(Box<Antidifference>),
    NotSummable,
}

impl GosperResult {
    pub fn is_summable(&self) -> bool {
        matches!(self, GosperResult::Summable(_))
    }

    pub fn antidifference(&self) -> Option<&Antidifference> {
        match self {
            GosperResult::Summable(a) => Some(a),
            GosperResult::NotSummable => None,
        }
    }
}

/// Auxiliary symbol for the shift in resultant computations.
pub(crate) fn shift_symbol() -> Symbol {
    Symbol::new("#j")
}

/// Non-negative integers `j` with `deg gcd(q(k), r(k+j)) > 0`, ascending.
pub fn shift_roots(q: &Polynomial, r: &Polynomial, var: &Symbol) -> Result<Vec<i64>> {
    if q.deg(var) <= 0 || r.deg(var) <= 0 {
        return Ok(Vec::new());
    }
    let j = shift_symbol();
    let shifted = r.substitute(var, &(&Polynomial::var(var.clone()) + &Polynomial::var(j.clone())));
    let res = resultant(q, &shifted, var)?;
    if res.is_zero() {
        return Err(Error::Algebra(format!(
            "resultant vanishes identically for q = {}, r = {}",
            q, r
        )));
    }
    let roots = parametric_integer_roots(&res, &j)?;
    roots
        .into_iter()
        .filter(|x| !x.is_negative())
        .map(|x: BigInt| {
            x.to_i64()
                .ok_or_else(|| Error::Algebra(format!("shift {} too large", x)))
        })
        .collect()
}

/// Splits `rho = a(k)/a(k-1)` starting from `p = initial`.
pub fn decompose(rho: &RationalFunction, initial: &Polynomial, var: &Symbol) -> Result<GosperDecomposition> {
    if rho.is_zero() {
        return Err(Error::Algebra("zero ratio".into()));
    }
    let p = if initial.is_zero() { Polynomial::one() } else { initial.clone() };
    let qr = &(rho * &RationalFunction::from_poly(p.shift(var, -1))) / &RationalFunction::from_poly(p.clone());
    let (mut q, mut r) = qr.into_parts();
    let mut p = p;
    loop {
        let mut changed = false;
        for j in shift_roots(&q, &r, var)? {
            let g = poly_gcd(&q, &r.shift(var, j));
            if g.deg(var) <= 0 {
                continue;
            }
            q = q.div_exact(&g).expect("gcd divides q");
            r = r.div_exact(&g.shift(var, -j)).expect("shifted gcd divides r");
            for i in 0..j {
                p = &p * &g.shift(var, -i);
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(GosperDecomposition {
        var: var.clone(),
        p,
        q,
        r,
    })
}

/// Degree of the polynomial `f` solving `q(k+1) f(k) - r(k) f(k-1) = p(k)`,
/// or `None` when no solution can exist.
pub fn degree_bound(d: &GosperDecomposition) -> Option<i64> {
    degree_bound_for(&d.q, &d.r, d.p.deg(&d.var), &d.var)
}

pub(crate) fn degree_bound_for(q: &Polynomial, r: &Polynomial, deg_p: i64, k: &Symbol) -> Option<i64> {
    let q1 = q.shift(k, 1);
    let sigma = &q1 + r;
    let delta = &q1 - r;
    let (ds, dd) = (sigma.deg(k), delta.deg(k));
    let bound = if dd >= ds {
        deg_p - dd
    } else {
        let l = ds;
        let lc = sigma.coefficient_of(k, l as u32);
        let sub = if l >= 1 { delta.coefficient_of(k, (l - 1) as u32) } else { Polynomial::zero() };
        let u = RationalFunction::new(sub.scale(&crate::algebra::rational::rat(-2)), lc);
        let base = deg_p - l + 1;
        match u.constant_value() {
            Some(v) if v.is_integer() && !v.is_negative() => match v.to_integer().to_i64() {
                Some(u) => u.max(base),
                None => base,
            },
            _ => base,
        }
    };
    (bound >= 0).then_some(bound)
}

/// Solves the functional equation for `f` of degree at most `degree`.
pub fn solve_functional(d: &GosperDecomposition, degree: i64) -> Option<RationalFunction> {
    if degree < 0 {
        return None;
    }
    let k = &d.var;
    let kp = Polynomial::var(k.clone());
    let q1 = d.q.shift(k, 1);
    let columns: Vec<Polynomial> = (0..=degree as u32)
        .map(|i| &(&q1 * &kp.pow(i)) - &(&d.r * &kp.shift(k, -1).pow(i)))
        .collect();
    let rows = columns
        .iter()
        .map(|c| c.deg(k))
        .chain([d.p.deg(k)])
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for j in 0..=rows {
        a.push(
            columns
                .iter()
                .map(|c| RationalFunction::from_poly(c.coefficient_of(k, j)))
                .collect(),
        );
        b.push(RationalFunction::from_poly(d.p.coefficient_of(k, j)));
    }
    let sol = linear_solve(&a, &b);
    let x = sol.any()?;
    let mut f = RationalFunction::zero();
    for (i, c) in x.iter().enumerate() {
        f = &f + &c.mul_poly(&kp.pow(i as u32));
    }
    Some(f)
}

/// Decides whether `t` has a hypergeometric antidifference in `var`.
pub fn gosper_sum(t: &HypergeometricTerm, var: &Symbol) -> Result<GosperResult> {
    let ratio = t.ratio(var);
    let rho = ratio.shift(var, -1);
    let d = decompose(&rho, t.rational().numer(), var)?;
    let Some(degree) = degree_bound(&d) else {
        return Ok(GosperResult::NotSummable);
    };
    let Some(f) = solve_functional(&d, degree) else {
        return Ok(GosperResult::NotSummable);
    };
    if f.is_zero() {
        return Ok(GosperResult::NotSummable);
    }
    let multiplier = f.mul_poly(&d.q.shift(var, 1)).div_poly(&d.p);
    // T(k) - T(k-1) = t(k)  <=>  M(k) - M(k-1) / rho(k) = 1
    let check = &multiplier - &(&multiplier.shift(var, -1) / &rho);
    if !check.is_one() {
        return Err(Error::Algebra(format!(
            "antidifference check failed for {}: residual {}",
            t, check
        )));
    }
    let term = t.mul_ratfun(&multiplier)?.absorb_linear_factors();
    Ok(GosperResult::Summable(Box::new(Antidifference {
        decomposition: d,
        f,
        multiplier,
        term,
    })))
}
