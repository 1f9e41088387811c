//! Acceptance report: one PASS/FAIL line per criterion, exact arithmetic,
//! with wall-clock limits.

#[path = "../../core/tests/support/props.rs"]
mod props;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use hypersum::algebra::rational::rat;
use hypersum::algebra::{Polynomial, Symbol};
use hypersum::certificate::{CertificateDocument, Status};
use hypersum::gosper::{gosper_sum, GosperResult};
use hypersum::oracle::{oracle_check_recurrence, oracle_sum, Window};
use hypersum::ore::{eliminate, right_divide, Bounds, OreOperator, ShiftOperator};
use hypersum::parse::{parse_polynomial, parse_ratfun};
use hypersum::term::{parse_term, HypergeometricTerm, LinearForm, ShadowSelection};
use hypersum::wz::{dualize, make_wz_pair, verify_wz, DualWindow};
use hypersum::zeilberger::{
    creative_telescope, solve_first_order, verify_certificate, FirstOrderSolution, RecurrenceOperator,
    TelescopeCertificate, DEFAULT_MAX_ORDER,
};

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl Into<String>) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn t(s: &str) -> Result<HypergeometricTerm, String> {
    parse_term(s).map_err(|e| e.to_string())
}

fn poly(s: &str) -> Polynomial {
    parse_polynomial(s).expect("fixed polynomial")
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

/// Runs `hypersum zeil` and re-reads the emitted document.
fn zeil_document(term: &str) -> Result<(CertificateDocument, TelescopeCertificate), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hypersum"))
        .args(["zeil", term])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("zeil exited with {:?}", out.status.code()))?;
    let doc = CertificateDocument::from_json(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
    ensure(doc.status == Status::Verified, "document not verified")?;
    ensure(doc.check().map_err(|e| e.to_string())? == Status::Verified, "re-check failed")?;
    let cert = doc.telescope().map_err(|e| e.to_string())?;
    Ok((doc, cert))
}

fn proportional(op: &RecurrenceOperator, coefficients: &[&str]) -> Check {
    let expected = RecurrenceOperator::normalized(sym("n"), coefficients.iter().map(|c| poly(c)).collect())
        .map_err(|e| e.to_string())?
        .0;
    ensure(*op == expected, format!("operator {} is not proportional to {}", op, expected))
}

fn closed_form(op: &RecurrenceOperator, initial: &HypergeometricTerm) -> Result<HypergeometricTerm, String> {
    match solve_first_order(op, initial, 0).map_err(|e| e.to_string())? {
        FirstOrderSolution::Term(x) => Ok(x),
        other => Err(format!("no closed form: {:?}", other)),
    }
}

fn criterion_1() -> Check {
    let f = t("binomial(n,k)*binomial(b,k)")?;
    let (_, cert) = zeil_document("binomial(n,k)*binomial(b,k)")?;
    proportional(&cert.operator, &["-(n+b+1)", "n+1"])?;
    ensure(verify_certificate(&f, &cert), "certificate")?;
    let a = closed_form(&cert.operator, &HypergeometricTerm::one())?;
    ensure(a == t("(n+b)!/(n!*b!)")?, format!("closed form {}", a))
}

const DIXON: &str = "(-1)^k/((n+k)!*(n-k)!*(b+k)!*(b-k)!*(a+k)!*(a-k)!)";

fn criterion_2() -> Check {
    let f = t(DIXON)?;
    let (_, cert) = zeil_document(DIXON)?;
    proportional(&cert.operator, &["-(n+a+b+1)", "(n+1)*(n+a+1)*(n+b+1)"])?;
    let g = t("(-1)^(k-1)/((n+k)!*(n+1-k)!*(b+k-1)!*(b-k)!*(a+k-1)!*(a-k)!)")?;
    let explicit = TelescopeCertificate {
        sumvar: sym("k"),
        operator: RecurrenceOperator::unnormalized(sym("n"), vec![poly("-2*(n+a+b+1)"), poly("2*(n+1)*(n+a+1)*(n+b+1)")])
            .map_err(|e| e.to_string())?,
        certificate: g.div(&f).to_ratfun().ok_or("G/F is not rational")?,
    };
    ensure(verify_certificate(&f, &explicit), "explicit G fails")
}

fn criterion_3() -> Check {
    let (_, cert) = zeil_document("1/(fact(k)*fact(n-k))")?;
    proportional(&cert.operator, &["2", "-(n+1)"])?;
    let a = closed_form(&cert.operator, &HypergeometricTerm::one())?;
    ensure(a == t("2^n/n!")?, format!("closed form {}", a))
}

/// Items of criterion 4; the last one is reported separately.
fn criterion_4() -> (Check, Check) {
    let decide = |s: &str, v: &str| -> Result<GosperResult, String> {
        gosper_sum(&t(s)?, &sym(v)).map_err(|e| e.to_string())
    };
    let items = (|| -> Check {
        match decide("(n-1)*(n-1)!", "n")? {
            GosperResult::Summable(a) => ensure(a.term == t("n!")?, format!("antidifference {}", a.term))?,
            GosperResult::NotSummable => return Err("(n-1)(n-1)! not summable".into()),
        }
        for (s, v) in [("n!", "n"), ("(2*m)!/(m!*(m+1)!)", "m"), ("1/k", "k"), ("binomial(A,k)", "k")] {
            ensure(!decide(s, v)?.is_summable(), format!("{} reported summable", s))?;
        }
        let adjusted = "(1-n^2-n^4)/(2*n!*(n^4+n^2+1))";
        match decide(adjusted, "n")? {
            GosperResult::Summable(a) => {
                ensure(a.term == t("(n+1)/(2*(n^2+n+1)*n!)")?, format!("antidifference {}", a.term))
            }
            GosperResult::NotSummable => Err(format!("{} not summable", adjusted)),
        }
    })();
    let literal = (|| -> Check {
        let s = "1/(n!*(n^4+n^2+1))";
        ensure(decide(s, "n")?.is_summable(), format!("{} is not Gosper-summable", s))
    })();
    (items, literal)
}

fn criterion_5() -> Check {
    let pair = make_wz_pair(&t("binomial(n,k)")?, &t("2^n")?, &sym("n"), &sym("k")).map_err(|e| e.to_string())?;
    ensure(pair.g == t("-binomial(n,k-1)/2^(n+1)")?, format!("G = {}", pair.g))?;
    ensure(pair.certificate == parse_ratfun("-k/(2*(n-k+1))").unwrap(), "certificate")?;
    ensure(verify_wz(&pair), "verify_wz")
}

fn reindex(pairs: &[(&str, &str)]) -> BTreeMap<Symbol, LinearForm> {
    pairs.iter().map(|(s, v)| (sym(s), LinearForm::parse(v).expect("fixed form"))).collect()
}

fn criterion_6() -> Check {
    let (n, k) = (sym("n"), sym("k"));
    let pair = make_wz_pair(&t("binomial(n,k)")?, &t("2^n")?, &n, &k).map_err(|e| e.to_string())?;
    let to_dual = reindex(&[("n", "-n-1"), ("k", "-k")]);
    let claim = dualize(&pair, &ShadowSelection::Default, &to_dual, &DualWindow::default()).map_err(|e| e.to_string())?;
    ensure(claim.sums.len() == 12 && claim.sums[0].0 == 1, "window k = 1..12")?;
    let (summand, rhs) = claim.normalized().map_err(|e| e.to_string())?;
    ensure(summand == t("(-2)^n*binomial(k,n)")?, format!("dual summand {}", summand))?;
    ensure(rhs == t("(-1)^k")?, format!("dual right-hand side {}", rhs))?;

    let special = reindex(&[("a", "n")]);
    let f = t("binomial(n,k)*binomial(a,k)")?.affine_substitute(&special).map_err(|e| e.to_string())?;
    let nice = t("binomial(n+a,a)")?.affine_substitute(&special).map_err(|e| e.to_string())?;
    let pair = make_wz_pair(&f, &nice, &n, &k).map_err(|e| e.to_string())?;
    ensure(verify_wz(&pair), "specialized pair")?;
    let window = DualWindow { free: 0..=20, ..DualWindow::default() };
    let claim = dualize(&pair, &ShadowSelection::Default, &to_dual, &window).map_err(|e| e.to_string())?;
    ensure(claim.constant == rat(0), "dual constant")?;
    let swapped = claim
        .summand
        .affine_substitute(&reindex(&[("n", "k"), ("k", "n")]))
        .map_err(|e| e.to_string())?
        .unflag();
    let expected = t("(3*k-2*n)*binomial(n,k)^2*binomial(2*k,k)")?;
    let ratio = swapped.div(&expected).to_ratfun().and_then(|q| q.constant_value());
    ensure(ratio.is_some_and(|c| c != rat(0)), format!("dual summand {}", swapped))?;
    let sums = oracle_sum(&expected, &k, &n, 0..=20, &Window::Auto, &BTreeMap::new()).map_err(|e| e.to_string())?;
    ensure(sums.iter().all(|s| *s == rat(0)), "oracle sums do not vanish")
}

fn criterion_7() -> Check {
    let op = |s: &str| OreOperator::parse(s).map_err(|e| e.to_string());
    let (p, q) = (op("(n-k+1)*N - (n+1)")?, op("(k+1)*K - (n-k)")?);
    let e = eliminate(&p, &q, Bounds::DEFAULT).map_err(|e| e.to_string())?;
    ensure(e.check(&p, &q), "Pascal identity")?;
    ensure(e.s == op("(n+1)*(N-2)")?, format!("Pascal S = {}", e.s))?;
    let q = op("(k+1)^2*K - (n-k)*(b-k)")?;
    let e = eliminate(&p, &q, Bounds::DEFAULT).map_err(|e| e.to_string())?;
    ensure(e.check(&p, &q), "Vandermonde identity")?;
    ensure(e.s == op("(n+1)*((n+1)*N - (n+b+1))")?, format!("Vandermonde S = {}", e.s))?;
    ensure(e.rbar == op("N*k^2")?, format!("Rbar = {}", e.rbar))
}

fn criterion_8() -> Check {
    let op = |s: &str| OreOperator::parse(s).map_err(|e| e.to_string());
    let product = op("(N^2+N+1)*(N^2-N-1)")?;
    ensure(product == op("N^4-N^2-2*N-1")?, format!("product {}", product))?;
    let s = ShiftOperator::from_ore(&product).map_err(|e| e.to_string())?;
    let s1 = ShiftOperator::from_ore(&op("N^2-N-1")?).map_err(|e| e.to_string())?;
    let (quotient, rem) = right_divide(&s, &s1).map_err(|e| e.to_string())?;
    ensure(rem.is_zero(), "nonzero remainder")?;
    ensure(
        quotient == ShiftOperator::from_ore(&op("N^2+N+1")?).map_err(|e| e.to_string())?,
        format!("quotient {}", quotient),
    )
}

fn telescoped(term: &str) -> Result<(HypergeometricTerm, TelescopeCertificate), String> {
    let f = t(term)?;
    let cert = creative_telescope(&f, &sym("k"), &sym("n"), DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
    Ok((f, cert))
}

fn criterion_9() -> Check {
    let (n, k) = (sym("n"), sym("k"));
    let none = BTreeMap::new();
    let (f, cert) = telescoped("binomial(n-k,k)")?;
    proportional(&cert.operator, &["-1", "-1", "1"])?;
    let sums = oracle_sum(&f, &k, &n, 0..=30, &Window::Relative { lo: 0, hi_offset: 0 }, &none)
        .map_err(|e| e.to_string())?;
    ensure(oracle_check_recurrence(&cert.operator, 0, &sums, &none), "Fibonacci residuals")?;

    let (f, cert) = telescoped("binomial(n,k)*binomial(n+k,k)")?;
    ensure(cert.operator.order() == 2, format!("Delannoy operator {}", cert.operator))?;
    let sums = oracle_sum(&f, &k, &n, 0..=20, &Window::Auto, &none).map_err(|e| e.to_string())?;
    ensure(sums[..4] == [rat(1), rat(3), rat(13), rat(63)], "Delannoy values")?;
    ensure(oracle_check_recurrence(&cert.operator, 0, &sums, &none), "Delannoy residuals")?;

    let (f, cert) = telescoped("(a+k-1)!*(b+k-1)!*(c-a-b+n-k-1)!/(k!*(n-k)!*(c+k-1)!)")?;
    ensure(cert.operator.order() == 1, format!("Pfaff-Saalschutz operator {}", cert.operator))?;
    let window = Window::Relative { lo: 0, hi_offset: 0 };
    for a in 2..=4 {
        for b in 2..=4 {
            // (c-a-b+n-k-1)! needs c >= a + b + 1 at k = n.
            for c in a + b + 1..=a + b + 3 {
                let params = BTreeMap::from([(sym("a"), a), (sym("b"), b), (sym("c"), c)]);
                let sums = oracle_sum(&f, &k, &n, 0..=10, &window, &params).map_err(|e| e.to_string())?;
                ensure(
                    oracle_check_recurrence(&cert.operator, 0, &sums, &params),
                    format!("Pfaff-Saalschutz residuals at a={} b={} c={}", a, b, c),
                )?;
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    props::gosper_round_trip(200)?;
    props::shadow_ratio_invariance(100)?;
    props::operator_properties(100)
}

struct Line {
    id: usize,
    name: &'static str,
    limit: Duration,
    result: Check,
    elapsed: Duration,
}

fn timed(id: usize, name: &'static str, limit_ms: u64, f: impl FnOnce() -> Check) -> Line {
    let start = Instant::now();
    let result = f();
    Line {
        id,
        name,
        limit: Duration::from_millis(limit_ms),
        result,
        elapsed: start.elapsed(),
    }
}

#[test]
fn acceptance() {
    let mut lines = vec![
        timed(1, "Vandermonde-Chu", 2_000, criterion_1),
        timed(2, "Dixon", 10_000, criterion_2),
        timed(3, "fast-algorithm example", 1_000, criterion_3),
    ];
    let start = Instant::now();
    let (items, literal) = criterion_4();
    let elapsed = start.elapsed();
    lines.push(Line {
        id: 4,
        name: "Gosper decisions",
        limit: Duration::from_millis(6_000),
        result: items.clone().and(literal.clone()),
        elapsed,
    });
    lines.extend([
        timed(5, "WZ pair for sum binomial(n,k) = 2^n", 1_000, criterion_5),
        timed(6, "dual pipeline", 5_000, criterion_6),
        timed(7, "elimination", 10_000, criterion_7),
        timed(8, "operator algebra", 100, criterion_8),
        timed(9, "homework recurrences", 20_000, criterion_9),
        timed(10, "property suites", 120_000, criterion_10),
    ]);

    let mut failed = Vec::new();
    for line in &lines {
        let verdict = match &line.result {
            Ok(()) if line.elapsed <= line.limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {} ms limit)", line.limit.as_millis()),
            Err(e) => format!("FAIL ({})", e),
        };
        if !verdict.starts_with("PASS") {
            failed.push(line.id);
        }
        println!(
            "criterion {:>2}: {} [{} ms] {}",
            line.id,
            verdict,
            line.elapsed.as_millis(),
            line.name
        );
    }
    // Criterion 4 claims 1/(n!(n^4+n^2+1)) is Gosper-summable; its sum is e/2,
    // which no rational multiple of the term can telescope to. That single
    // item stays a reported failure; everything else must pass.
    let known = |id: usize| id == 4 && items.is_ok() && literal.is_err();
    let unexpected: Vec<usize> = failed.into_iter().filter(|id| !known(*id)).collect();
    assert!(unexpected.is_empty(), "failed criteria: {:?}", unexpected);
}
