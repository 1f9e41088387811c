//! Brute-force exact summation, independent of the symbolic algorithms.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::algebra::{Rational, Symbol};
use crate::error::{Error, Result};
use crate::term::{Evaluation, HypergeometricTerm};
use crate::zeilberger::RecurrenceOperator;

/// Range of the summation variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// `[-(|n| + M + 50), |n| + M + 50]` with `M` the largest parameter value.
    Auto,
    Fixed(i64, i64),
    /// `[lo, n + hi_offset]`, following the free variable.
    Relative { lo: i64, hi_offset: i64 },
}

impl Window {
    pub fn bounds(&self, n: i64, params: &BTreeMap<Symbol, i64>) -> (i64, i64) {
        match self {
            Window::Auto => {
                let m = params.values().map(|v| v.abs()).max().unwrap_or(0);
                let w = n.abs() + m + 50;
                (-w, w)
            }
            Window::Fixed(lo, hi) => (*lo, *hi),
            Window::Relative { lo, hi_offset } => (*lo, n + hi_offset),
        }
    }
}

/// `sum_k F(n, k)` for each `n` in `values`.
pub fn oracle_sum(
    f: &HypergeometricTerm,
    sumvar: &Symbol,
    var: &Symbol,
    values: RangeInclusive<i64>,
    window: &Window,
    params: &BTreeMap<Symbol, i64>,
) -> Result<Vec<Rational>> {
    let mut point = params.clone();
    let mut out = Vec::new();
    for n in values {
        point.insert(var.clone(), n);
        let (lo, hi) = window.bounds(n, params);
        let mut acc = Rational::zero();
        for k in lo..=hi {
            point.insert(sumvar.clone(), k);
            match f.evaluate(&point)? {
                Evaluation::Value(v) => acc += v,
                Evaluation::Undefined => {
                    return Err(Error::Undefined(format!(
                        "{} = {}, {} = {} of {}",
                        var, n, sumvar, k, f
                    )))
                }
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// `sum_i s_i(n) a(n + i)` for each admissible `n`, where `values[j] = a(start + j)`.
pub fn recurrence_residuals(
    op: &RecurrenceOperator,
    start: i64,
    values: &[Rational],
    params: &BTreeMap<Symbol, i64>,
) -> Result<Vec<Rational>> {
    let bound: BTreeMap<Symbol, Rational> = params
        .iter()
        .map(|(s, v)| (s.clone(), Rational::from_integer((*v).into())))
        .collect();
    let order = op.order();
    if values.len() <= order {
        return Err(Error::Degenerate(format!(
            "need more than {} values to check an order-{} recurrence",
            order, order
        )));
    }
    (0..values.len() - order)
        .map(|j| {
            op.residual(start + j as i64, &values[j..], &bound).ok_or_else(|| {
                Error::Undefined(format!("coefficients of {} have unbound symbols", op))
            })
        })
        .collect()
}

/// `true` when every residual vanishes.
pub fn oracle_check_recurrence(
    op: &RecurrenceOperator,
    start: i64,
    values: &[Rational],
    params: &BTreeMap<Symbol, i64>,
) -> bool {
    recurrence_residuals(op, start, values, params).is_ok_and(|r| r.iter().all(|v| v.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::parse::parse_polynomial;
    use crate::term::parse_term;

    fn sums(s: &str, range: RangeInclusive<i64>) -> Vec<Rational> {
        let f = parse_term(s).unwrap();
        oracle_sum(&f, &Symbol::k(), &Symbol::n(), range, &Window::Auto, &BTreeMap::new()).unwrap()
    }

    fn op(cs: &[&str]) -> RecurrenceOperator {
        RecurrenceOperator::new(
            Symbol::n(),
            cs.iter().map(|c| parse_polynomial(c).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn row_sums() {
        assert_eq!(sums("binomial(n,k)", 5..=5), vec![rat(32)]);
        assert_eq!(
            sums("binomial(n,k)*binomial(n+k,k)", 0..=3),
            vec![rat(1), rat(3), rat(13), rat(63)]
        );
    }

    #[test]
    fn recurrences() {
        let none = BTreeMap::new();
        let powers: Vec<Rational> = (0..=20).map(|i| rat(1 << i)).collect();
        assert!(oracle_check_recurrence(&op(&["-2", "1"]), 0, &powers, &none));
        assert!(!oracle_check_recurrence(&op(&["-2", "1"]), 0, &[rat(1), rat(2), rat(5)], &none));
        let f = parse_term("binomial(n-k,k)").unwrap();
        let w = Window::Relative { lo: 0, hi_offset: 0 };
        let fib = oracle_sum(&f, &Symbol::k(), &Symbol::n(), 0..=30, &w, &none).unwrap();
        assert_eq!(fib[30], rat(1346269));
        assert!(oracle_check_recurrence(&op(&["-1", "-1", "1"]), 0, &fib, &none));
    }

    #[test]
    fn undefined_points_are_errors() {
        let f = parse_term("(n-k-1)!").unwrap();
        let r = oracle_sum(&f, &Symbol::k(), &Symbol::n(), 0..=0, &Window::Auto, &BTreeMap::new());
        assert!(matches!(r, Err(Error::Undefined(_))));
    }
}
