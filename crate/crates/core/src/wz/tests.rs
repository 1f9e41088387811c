use super::*;
use crate::parse::parse_ratfun;
use crate::term::parse_term;

fn t(s: &str) -> HypergeometricTerm {
    parse_term(s).unwrap()
}

fn pair(f: &str, nice: &str) -> WzPair {
    make_wz_pair(&t(f), &t(nice), &Symbol::n(), &Symbol::k()).unwrap()
}

fn reindex(pairs: &[(&str, &str)]) -> BTreeMap<Symbol, LinearForm> {
    pairs
        .iter()
        .map(|(s, l)| (Symbol::new(s), LinearForm::parse(l).unwrap()))
        .collect()
}

#[test]
fn binomial_pair() {
    let p = pair("binomial(n,k)", "2^n");
    assert_eq!(p.g, t("-binomial(n,k-1)/2^(n+1)"));
    assert_eq!(p.certificate, parse_ratfun("-k/(2*(n-k+1))").unwrap());
    assert!(verify_wz(&p));
    let mut bad = p.clone();
    bad.g = bad.g.neg();
    bad.certificate = -&bad.certificate;
    assert!(!verify_wz(&bad));
}

#[test]
fn other_pairs() {
    for (f, nice) in [
        ("binomial(n,k)*x^k", "(1+x)^n"),
        ("binomial(n,k)^2", "binomial(2*n,n)"),
        ("binomial(n,k)*binomial(b,k)", "binomial(n+b,n)"),
    ] {
        assert!(verify_wz(&pair(f, nice)), "{}", f);
    }
    assert!(make_wz_pair(&t("binomial(n,k)"), &t("3^n"), &Symbol::n(), &Symbol::k()).is_err());
}

#[test]
fn scaling_keeps_certificate() {
    let a = pair("binomial(n,k)", "2^n");
    let b = pair("5*binomial(n,k)", "5*2^n");
    assert_eq!(a.certificate, b.certificate);
}

#[test]
fn shadow_pair_is_wz() {
    let p = pair("binomial(n,k)", "2^n");
    let s = WzPair {
        f: p.f.shadow(&ShadowSelection::Default).unwrap(),
        g: p.g.shadow(&ShadowSelection::Default).unwrap(),
        ..p.clone()
    };
    assert!(verify_wz(&s));
}

#[test]
fn telescoping_sanity() {
    let p = pair("binomial(n,k)", "2^n");
    let n = Symbol::n();
    let k = Symbol::k();
    for nv in 0..=20 {
        let mut lhs = Rational::from_integer(0.into());
        for kv in -1..=nv + 1 {
            let at = |dn: i64| BTreeMap::from([(n.clone(), nv + dn), (k.clone(), kv)]);
            let v = |t: &HypergeometricTerm, m| t.evaluate(&m).unwrap().value().unwrap().clone();
            lhs += v(&p.f, at(1)) - v(&p.f, at(0));
        }
        assert_eq!(lhs, Rational::from_integer(0.into()));
    }
}

#[test]
fn dual_of_row_sum() {
    let p = pair("binomial(n,k)", "2^n");
    let claim = dualize(
        &p,
        &ShadowSelection::Default,
        &reindex(&[("k", "-k"), ("n", "-n-1")]),
        &DualWindow::default(),
    )
    .unwrap();
    let (summand, rhs) = claim.normalized().unwrap();
    assert_eq!(summand, t("(-2)^n*binomial(k,n)"));
    assert_eq!(rhs, t("(-1)^k"));
}

#[test]
fn identity_dual_is_idempotent() {
    let p = pair("binomial(n,k)", "2^n");
    let dual = dualize(
        &p,
        &ShadowSelection::Default,
        &reindex(&[("k", "-k"), ("n", "-n-1")]),
        &DualWindow::default(),
    )
    .unwrap();
    let q = WzPair { g: dual.summand.clone(), ..p };
    let id = BTreeMap::new();
    let once = dualize(&q, &ShadowSelection::None, &id, &DualWindow::default()).unwrap();
    let twice = WzPair { g: once.summand.clone(), ..q };
    let again = dualize(&twice, &ShadowSelection::None, &id, &DualWindow::default()).unwrap();
    assert_eq!(once.summand, dual.summand);
    assert_eq!(again, once);
}

#[test]
fn specialize_and_dualize() {
    let vandermonde = t("binomial(n,k)*binomial(a,k)");
    let nice = t("binomial(n+a,a)");
    let special = reindex(&[("a", "n")]);
    let f = vandermonde.affine_substitute(&special).unwrap();
    let g = nice.affine_substitute(&special).unwrap();
    assert_eq!(f, t("binomial(n,k)^2"));
    let p = make_wz_pair(&f, &g, &Symbol::n(), &Symbol::k()).unwrap();
    assert!(verify_wz(&p));
    let w = DualWindow { free: 0..=20, ..DualWindow::default() };
    let claim = dualize(&p, &ShadowSelection::Default, &reindex(&[("k", "-k"), ("n", "-n-1")]), &w).unwrap();
    assert_eq!(claim.constant, Rational::from_integer(0.into()));
    let swapped = claim.summand.affine_substitute(&reindex(&[("n", "k"), ("k", "n")])).unwrap().unflag();
    let expected = t("(3*k-2*n)*binomial(n,k)^2*binomial(2*k,k)");
    let q = swapped.div(&expected).to_ratfun().unwrap();
    assert!(q.constant_value().is_some());
}
