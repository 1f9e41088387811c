mod support;

use std::collections::BTreeMap;

use hypersum::algebra::Symbol;
use hypersum::oracle::{oracle_check_recurrence, oracle_sum, Window};
use hypersum::term::parse_term;
use hypersum::zeilberger::{creative_telescope, verify_certificate};
use proptest::prelude::*;

use support::props;

#[test]
fn gosper_round_trip() {
    props::gosper_round_trip(200).unwrap();
}

#[test]
fn shadow_ratio_invariance() {
    props::shadow_ratio_invariance(100).unwrap();
}

#[test]
fn operator_algebra() {
    props::operator_properties(100).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn zeilberger_is_sound(c in prop_oneof![Just(1i64), Just(2), Just(-1)], d in 0i64..=2, twice in any::<bool>()) {
        let extra = if twice { format!("*binomial(n+{},k)", d) } else { String::new() };
        let text = format!("({})^k*binomial(n,k){}", c, extra);
        let f = parse_term(&text).unwrap();
        let (n, k) = (Symbol::n(), Symbol::k());
        let cert = creative_telescope(&f, &k, &n, 4).unwrap();
        prop_assert!(verify_certificate(&f, &cert));
        let none = BTreeMap::new();
        // Certificates such as -k/n for (-1)^k binomial(n,k) have a pole at n = 0.
        let sums = oracle_sum(&f, &k, &n, 1..=10, &Window::Auto, &none).unwrap();
        prop_assert!(oracle_check_recurrence(&cert.operator, 1, &sums, &none), "{}", text);
    }
}
