use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gcd::poly_gcd;
use super::poly::Polynomial;
use super::symbol::Symbol;
use crate::error::Error;

/// Largest candidate count scanned before giving up.
const SCAN_LIMIT: u64 = 50_000_000;

/// Integer coefficients of a univariate polynomial, index = power.
fn integer_coefficients(p: &Polynomial, var: &Symbol) -> Result<Vec<BigInt>, Error> {
    if !p.is_univariate_in(var) {
        return Err(Error::Algebra(format!(
            "integer_roots expects a polynomial in {} only, got {}",
            var, p
        )));
    }
    let prim = p.primitive();
    let coeffs = prim.coefficients_in(var);
    Ok(coeffs
        .into_iter()
        .map(|c| {
            c.constant_value()
                .map(|v| v.to_integer())
                .unwrap_or_else(BigInt::zero)
        })
        .collect())
}

fn horner(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// All integer roots of a univariate polynomial in ascending order.
pub fn integer_roots(p: &Polynomial, var: &Symbol) -> Result<Vec<BigInt>, Error> {
    if p.is_zero() {
        return Err(Error::Algebra("infinitely many roots".into()));
    }
    let coeffs = integer_coefficients(p, var)?;
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let trimmed = &coeffs[low..];
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(BigInt::zero());
    }
    if trimmed.len() <= 1 {
        return Ok(roots);
    }
    let a0 = trimmed[0].abs();
    let an = trimmed.last().expect("nonempty").abs();
    let max_ratio = trimmed[..trimmed.len() - 1]
        .iter()
        .map(|c| {
            let (q, r) = c.abs().div_rem(&an);
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        })
        .max()
        .unwrap_or_else(BigInt::zero);
    let bound: BigInt = max_ratio + 1;
    let sqrt = a0.sqrt();
    let limit = if bound < sqrt { bound.clone() } else { sqrt.clone() };
    let limit = limit.to_u64().filter(|l| *l <= SCAN_LIMIT).ok_or_else(|| {
        Error::Algebra(format!(
            "integer root search too large: trailing coefficient {}",
            a0
        ))
    })?;
    let mut candidates = Vec::new();
    let mut d = BigInt::one();
    for _ in 0..limit {
        if (&a0 % &d).is_zero() {
            candidates.push(d.clone());
            let co = &a0 / &d;
            if co <= bound {
                candidates.push(co);
            }
        }
        d += 1;
    }
    candidates.sort();
    candidates.dedup();
    for c in candidates {
        for x in [c.clone(), -c] {
            if horner(trimmed, &x).is_zero() {
                roots.push(x);
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Integer values of `var` at which `p` vanishes identically in its other
/// symbols.
pub fn parametric_integer_roots(p: &Polynomial, var: &Symbol) -> Result<Vec<BigInt>, Error> {
    if p.is_zero() {
        return Err(Error::Algebra("infinitely many roots".into()));
    }
    let mut g = Polynomial::zero();
    for (_, part) in p.split_by_other_monomials(var) {
        g = poly_gcd(&g, &part);
        if g.is_constant() {
            return Ok(Vec::new());
        }
    }
    integer_roots(&g, var)
}
