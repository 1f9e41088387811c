//! Property runs shared by the test suite and the acceptance report.

use std::collections::BTreeMap;

use hypersum::algebra::{Polynomial, RationalFunction, Symbol};
use hypersum::algebra::rational::rat;
use hypersum::gosper::{gosper_sum, GosperResult};
use hypersum::ore::{right_divide, OreOperator, ShiftOperator};
use hypersum::term::{parse_term, Evaluation, HypergeometricTerm, ShadowSelection};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        max_global_rejects: 10 * cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn factor_text() -> impl Strategy<Value = String> {
    (1i64..=2, 0i64..=3, any::<bool>()).prop_map(|(a, b, up)| {
        let arg = if a == 1 { format!("(k+{})!", b) } else { format!("({}*k+{})!", a, b) };
        if up {
            format!("*{}", arg)
        } else {
            format!("/{}", arg)
        }
    })
}

/// Random `c * base^k * (k^2 + u k + v) * factorials` in `k`.
pub fn gosper_term() -> impl Strategy<Value = String> {
    (
        prop_oneof![Just(1i64), Just(-2), Just(3)],
        prop_oneof![Just(""), Just("*2^k"), Just("*(-1)^k"), Just("*3^k")],
        0i64..=1,
        -3i64..=3,
        -3i64..=3,
        prop::collection::vec(factor_text(), 0..=2),
    )
        .prop_map(|(c, base, quad, u, v, facts)| {
            let poly = if quad == 1 {
                format!("(k^2+({})*k+({}))", u, v)
            } else {
                format!("(k+({}))", u)
            };
            format!("{}{}*{}{}", c, base, poly, facts.concat())
        })
}

fn value(t: &HypergeometricTerm, var: &Symbol, at: i64) -> Option<hypersum::algebra::Rational> {
    let point = BTreeMap::from([(var.clone(), at)]);
    match t.evaluate(&point).ok()? {
        Evaluation::Value(v) => Some(v),
        Evaluation::Undefined => None,
    }
}

/// Differences of random terms are summable, and the antidifference
/// differs from the original term by a constant.
pub fn gosper_round_trip(cases: u32) -> Result<(), String> {
    let k = Symbol::k();
    report(runner(cases).run(&gosper_term(), |text| {
        let big_t = parse_term(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = big_t.ratio(&k).shift(&k, -1);
        let factor = &RationalFunction::one() - &back.recip().expect("nonzero ratio");
        prop_assume!(!factor.is_zero());
        let t = big_t.mul_ratfun(&factor).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let anti = match gosper_sum(&t, &k) {
            Ok(GosperResult::Summable(a)) => a.term,
            other => return Err(TestCaseError::fail(format!("{} -> {:?}", text, other))),
        };
        let mut offset = None;
        for x in 4..10 {
            let (Some(a1), Some(a0), Some(tv), Some(b)) =
                (value(&anti, &k, x), value(&anti, &k, x - 1), value(&t, &k, x), value(&big_t, &k, x))
            else {
                continue;
            };
            prop_assert_eq!(&a1 - &a0, tv, "{} at k = {}", text, x);
            let d = &a1 - &b;
            match &offset {
                None => offset = Some(d),
                Some(o) => prop_assert_eq!(o, &d, "{}", text),
            }
        }
        Ok(())
    }))
}

/// Random proper term in `n` and `k`.
pub fn proper_term() -> impl Strategy<Value = String> {
    let factor = (-1i64..=2, -2i64..=2, 0i64..=3, any::<bool>()).prop_filter_map(
        "trivial argument",
        |(a, b, c, up)| {
            if a == 0 && b == 0 {
                return None;
            }
            let arg = format!("({}*n+({})*k+{})!", a, b, c);
            Some(if up { format!("*{}", arg) } else { format!("/{}", arg) })
        },
    );
    (
        prop_oneof![Just(""), Just("*2^k"), Just("*(-1)^n"), Just("*3^(n-k)")],
        prop::collection::vec(factor, 1..=3),
        0i64..=2,
    )
        .prop_map(|(base, facts, c)| format!("(n+k+{}){}{}", c, base, facts.concat()))
}

/// Shadowing preserves the shift quotients in both variables.
pub fn shadow_ratio_invariance(cases: u32) -> Result<(), String> {
    let (n, k) = (Symbol::n(), Symbol::k());
    report(runner(cases).run(&proper_term(), |text| {
        let f = parse_term(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let s = f
            .shadow(&ShadowSelection::Default)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(f.ratio(&n), s.ratio(&n), "{}", text);
        prop_assert_eq!(f.ratio(&k), s.ratio(&k), "{}", text);
        Ok(())
    }))
}

fn small_poly(with_k: bool) -> impl Strategy<Value = Polynomial> {
    let k_max = if with_k { 1i64 } else { 0 };
    (-2i64..=2, -2i64..=2, 0i64..=k_max, -2i64..=2).prop_map(|(c0, cn, ck, cnk)| {
        let (n, k) = (Polynomial::var(Symbol::n()), Polynomial::var(Symbol::k()));
        let mut p = Polynomial::from_int(c0);
        p = &p + &n.scale(&rat(cn));
        if ck != 0 {
            p = &p + &k;
            p = &p + &(&n * &k).scale(&rat(cnk));
        }
        p
    })
}

/// Random operator with up to three monomials.
pub fn operator(with_k: bool) -> impl Strategy<Value = OreOperator> {
    let k_max = if with_k { 2u32 } else { 0 };
    prop::collection::vec((small_poly(with_k), 0u32..=2, 0u32..=k_max), 1..=3).prop_map(|ms| {
        ms.into_iter()
            .fold(OreOperator::zero(), |acc, (c, a, b)| &acc + &OreOperator::monomial(c, a, b))
    })
}

/// Associativity, and exact reconstruction after reduction and division.
pub fn operator_properties(cases: u32) -> Result<(), String> {
    let ops = (operator(true), operator(true), operator(true), operator(false), operator(false));
    report(runner(cases).run(&ops, |(a, b, c, s, s1)| {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        let (red, rbar) = a.reduce_mod_delta();
        let delta = &OreOperator::shift_k() - &OreOperator::one();
        prop_assert_eq!(&red + &delta.multiply(&rbar), a);
        prop_assume!(!s1.is_zero());
        let (s, s1) = (
            ShiftOperator::from_ore(&s).expect("K-free"),
            ShiftOperator::from_ore(&s1).expect("K-free"),
        );
        let (t, rem) = right_divide(&s, &s1).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(t.multiply(&s1).add(&rem), s);
        prop_assert!(rem.order().map_or(true, |r| Some(r) < s1.order()));
        Ok(())
    }))
}
