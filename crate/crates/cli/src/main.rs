use std::collections::BTreeMap;
use std::fs;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hypersum::algebra::{Rational, Symbol};
use hypersum::certificate::{CertificateDocument, Status};
use hypersum::gosper::{gosper_sum, GosperResult};
use hypersum::oracle::{oracle_sum, recurrence_residuals, Window};
use hypersum::ore::{eliminate, right_divide, Bounds, OreOperator, ShiftOperator};
use hypersum::term::{parse_term, LinearForm, ShadowSelection};
use hypersum::wz::{dualize, make_wz_pair, DualWindow};
use hypersum::zeilberger::{creative_telescope, RecurrenceOperator, DEFAULT_MAX_ORDER};
use hypersum::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "hypersum", version, about = "Exact hypergeometric summation with checkable certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Indefinite summation: prints an antidifference T with T(k) - T(k-1) = t(k).
    Gosper {
        term: String,
        #[arg(long, default_value = "k")]
        var: String,
    },
    /// Creative telescoping: prints a certificate document.
    Zeil {
        term: String,
        #[arg(long, default_value = "k")]
        sumvar: String,
        #[arg(long, default_value = "n")]
        recvar: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
    },
    /// Proves `sum_k term = nice`, written as `TERM = NICE`.
    Prove {
        #[arg(required = true, num_args = 1..)]
        identity: Vec<String>,
        #[arg(long, default_value = "k")]
        sumvar: String,
        #[arg(long, default_value = "n")]
        recvar: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
    },
    /// Re-checks a certificate document.
    Verify { file: String },
    /// Derives the dual identity of a WZ certificate document.
    Dual {
        file: String,
        /// Affine substitutions, e.g. `n=-n-1,k=-k`.
        #[arg(long)]
        reindex: Option<String>,
        /// `default`, `none`, or factorial arguments separated by `;`.
        #[arg(long, default_value = "default")]
        shadow: String,
        /// Values of the free variable to sum at.
        #[arg(long, default_value = "1..12")]
        free: String,
        #[arg(long, default_value = "auto")]
        window: String,
        #[arg(long)]
        set: Option<String>,
    },
    /// Finds A, B, Rbar with A P + B Q = S + (K - 1) Rbar and S free of K and k.
    Eliminate {
        #[arg(long = "P")]
        p: String,
        #[arg(long = "Q")]
        q: String,
        /// Cofactor degree bounds in k, N and K.
        #[arg(long, default_value = "2,1,1")]
        bounds: String,
    },
    /// Sums a term by brute force and checks an optional recurrence.
    Oracle {
        term: String,
        #[arg(long, default_value = "0..10")]
        n: String,
        /// `auto`, or `lo..hi` where `hi` may be `n`, `n+c` or `n-c`.
        #[arg(long, default_value = "auto")]
        k: String,
        #[arg(long, default_value = "k")]
        sumvar: String,
        #[arg(long, default_value = "n")]
        recvar: String,
        /// Parameter values, e.g. `a=2,b=3`.
        #[arg(long)]
        set: Option<String>,
        /// Operator coefficients `s_0;s_1;...`.
        #[arg(long, conflicts_with = "certificate", allow_hyphen_values = true)]
        recurrence: Option<String>,
        /// Take the operator from a certificate document.
        #[arg(long)]
        certificate: Option<String>,
    },
}

/// Process outcome: `Refuted` maps to exit code 1.
enum Outcome {
    Done,
    Refuted,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Refuted) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotConstant(_) => 1,
        Error::OrderExhausted { .. } | Error::BoundsExhausted(_) => 3,
        _ => 2,
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Gosper { term, var } => {
            let t = parse_term(&term)?;
            match gosper_sum(&t, &symbol(&var)?)? {
                GosperResult::Summable(a) => println!("{}", a.term),
                GosperResult::NotSummable => println!("not summable"),
            }
        }
        Command::Zeil {
            term,
            sumvar,
            recvar,
            max_order,
        } => {
            let f = parse_term(&term)?;
            let cert = creative_telescope(&f, &symbol(&sumvar)?, &symbol(&recvar)?, max_order)?;
            println!("{}", CertificateDocument::from_telescope(&f, &cert).to_json());
        }
        Command::Prove {
            identity,
            sumvar,
            recvar,
            max_order,
        } => return prove(&identity.join(" "), &symbol(&sumvar)?, &symbol(&recvar)?, max_order),
        Command::Verify { file } => {
            let doc = read_document(&file)?;
            let status = doc.check()?;
            if status != doc.status {
                eprintln!("note: document records {:?}", doc.status);
            }
            return Ok(match status {
                Status::Verified => {
                    println!("verified");
                    Outcome::Done
                }
                Status::Refuted => {
                    println!("refuted");
                    Outcome::Refuted
                }
            });
        }
        Command::Dual {
            file,
            reindex,
            shadow,
            free,
            window,
            set,
        } => {
            let pair = read_document(&file)?.wz_pair()?;
            let selection = match shadow.as_str() {
                "default" => ShadowSelection::Default,
                "none" => ShadowSelection::None,
                list => ShadowSelection::Explicit(
                    list.split(';').map(LinearForm::parse).collect::<Result<_, _>>()?,
                ),
            };
            let reindex = match reindex {
                Some(text) => substitutions(&text)?,
                None => BTreeMap::new(),
            };
            let window = DualWindow {
                free: range(&free)?,
                window: window_arg(&window)?,
                params: assignments(set.as_deref())?,
            };
            let claim = dualize(&pair, &selection, &reindex, &window)?;
            let normalized = claim.normalized().ok();
            let report = json!({
                "summand": claim.summand.to_string(),
                "sumvar": claim.sumvar.to_string(),
                "freevar": claim.freevar.to_string(),
                "constant": claim.constant.to_string(),
                "identity": normalized.map(|(s, r)| format!("sum_{} {} = {}", claim.sumvar, s, r)),
                "sums": claim.sums.iter().map(|(v, s)| json!([v, s.to_string()])).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
        }
        Command::Eliminate { p, q, bounds } => {
            let (p, q) = (OreOperator::parse(&p)?, OreOperator::parse(&q)?);
            let r = eliminate(&p, &q, parse_bounds(&bounds)?)?;
            println!("S = {}", r.s);
            println!("A = {}", r.a);
            println!("B = {}", r.b);
            println!("Rbar = {}", r.rbar);
        }
        Command::Oracle {
            term,
            n,
            k,
            sumvar,
            recvar,
            set,
            recurrence,
            certificate,
        } => {
            let f = parse_term(&term)?;
            let (sumvar, recvar) = (symbol(&sumvar)?, symbol(&recvar)?);
            let values = range(&n)?;
            let window = window_arg(&k)?;
            let params = assignments(set.as_deref())?;
            let sums = oracle_sum(&f, &sumvar, &recvar, values.clone(), &window, &params)?;
            let op = match (recurrence, certificate) {
                (Some(text), _) => Some(RecurrenceOperator::parse(recvar.clone(), &text.split(';').collect::<Vec<_>>())?),
                (None, Some(file)) => Some(read_document(&file)?.telescope()?.operator),
                (None, None) => None,
            };
            let residuals = match &op {
                Some(op) => recurrence_residuals(op, *values.start(), &sums, &params)?,
                None => Vec::new(),
            };
            let report = json!({
                "n": values.clone().collect::<Vec<_>>(),
                "sum": strings(&sums),
                "residuals": strings(&residuals),
                "window": k,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            if residuals.iter().any(|r| *r != Rational::from_integer(0.into())) {
                return Ok(Outcome::Refuted);
            }
        }
    }
    Ok(Outcome::Done)
}

fn prove(identity: &str, k: &Symbol, n: &Symbol, max_order: usize) -> Result<Outcome, Error> {
    let (lhs, rhs) = identity
        .split_once('=')
        .ok_or_else(|| Error::Document("expected `TERM = NICE`".into()))?;
    let (summand, nice) = (parse_term(lhs.trim())?, parse_term(rhs.trim())?);
    match make_wz_pair(&summand, &nice, n, k) {
        Ok(pair) => {
            let doc = CertificateDocument::from_wz(&summand, &nice, &pair);
            println!("{}", doc.to_json());
            return Ok(status_outcome(doc.status));
        }
        Err(Error::NotWz(reason)) => eprintln!("no WZ pair ({}); trying creative telescoping", reason),
        Err(e) => return Err(e),
    }
    let f = summand.div(&nice);
    let cert = creative_telescope(&f, k, n, max_order)?;
    let mut doc = CertificateDocument::from_telescope(&f, &cert);
    doc.input = summand.to_string();
    doc.rhs = Some(nice.to_string());
    doc.status = doc.check()?;
    println!("{}", doc.to_json());
    // S applied to the constant 1 is the remainder of S by N - 1.
    let s = ShiftOperator::from_ore(&OreOperator::from_recurrence(&cert.operator))?;
    let unit = ShiftOperator::from_ore(&OreOperator::parse("N - 1")?)?;
    let (t, rem) = right_divide(&s, &unit)?;
    if !rem.is_zero() {
        eprintln!("refuted: S = ({}) (N - 1) + {}", t, rem);
        return Ok(Outcome::Refuted);
    }
    let order = cert.operator.order();
    eprintln!("S = ({}) (N - 1)", t);
    let first = order.max(1) as i64;
    match oracle_sum(&f, k, n, 0..=first - 1, &Window::Auto, &BTreeMap::new()) {
        Ok(values) if values.iter().all(|v| *v == Rational::from_integer(1.into())) => {
            eprintln!("initial values n = 0..{} agree", first - 1);
            Ok(status_outcome(doc.status))
        }
        Ok(values) => {
            eprintln!("refuted: initial sums {:?}", strings(&values));
            Ok(Outcome::Refuted)
        }
        Err(e) => {
            eprintln!("initial values n = 0..{} still to be checked ({})", first - 1, e);
            Ok(status_outcome(doc.status))
        }
    }
}

fn status_outcome(status: Status) -> Outcome {
    match status {
        Status::Verified => Outcome::Done,
        Status::Refuted => Outcome::Refuted,
    }
}

fn read_document(file: &str) -> Result<CertificateDocument, Error> {
    let text = fs::read_to_string(file).map_err(|e| Error::Document(format!("{}: {}", file, e)))?;
    CertificateDocument::from_json(&text)
}

fn malformed(what: &str, text: &str) -> Error {
    Error::Document(format!("malformed {} {:?}", what, text))
}

fn symbol(text: &str) -> Result<Symbol, Error> {
    let form = LinearForm::parse(text)?;
    match form.coeffs().iter().next() {
        Some((s, 1)) if form.coeffs().len() == 1 && form.constant_term() == 0 => Ok(s.clone()),
        _ => Err(malformed("variable", text)),
    }
}

fn integer(text: &str) -> Result<i64, Error> {
    text.trim().parse().map_err(|_| malformed("integer", text))
}

fn range(text: &str) -> Result<RangeInclusive<i64>, Error> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| malformed("range", text))?;
    Ok(integer(lo)?..=integer(hi.trim_start_matches('='))?)
}

fn window_arg(text: &str) -> Result<Window, Error> {
    if text == "auto" {
        return Ok(Window::Auto);
    }
    let (lo, hi) = text.split_once("..").ok_or_else(|| malformed("window", text))?;
    let lo = integer(lo)?;
    let hi = hi.trim();
    match hi.strip_prefix('n') {
        Some("") => Ok(Window::Relative { lo, hi_offset: 0 }),
        Some(offset) => Ok(Window::Relative {
            lo,
            hi_offset: integer(&offset.replace(' ', "").replace('+', ""))?,
        }),
        None => Ok(Window::Fixed(lo, integer(hi)?)),
    }
}

fn assignments(text: Option<&str>) -> Result<BTreeMap<Symbol, i64>, Error> {
    let mut out = BTreeMap::new();
    for item in text.unwrap_or("").split(',').filter(|s| !s.trim().is_empty()) {
        let (name, value) = item.split_once('=').ok_or_else(|| malformed("assignment", item))?;
        out.insert(symbol(name.trim())?, integer(value)?);
    }
    Ok(out)
}

fn substitutions(text: &str) -> Result<BTreeMap<Symbol, LinearForm>, Error> {
    let mut out = BTreeMap::new();
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, value) = item.split_once('=').ok_or_else(|| malformed("substitution", item))?;
        out.insert(symbol(name.trim())?, LinearForm::parse(value)?);
    }
    Ok(out)
}

fn parse_bounds(text: &str) -> Result<Bounds, Error> {
    let v: Vec<i64> = text.split(',').map(integer).collect::<Result<_, _>>()?;
    match v[..] {
        [k, n, kk] if k >= 0 && n >= 0 && kk >= 0 => Ok(Bounds {
            k: k as u32,
            shift_n: n as u32,
            shift_k: kk as u32,
        }),
        _ => Err(malformed("bounds", text)),
    }
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}
