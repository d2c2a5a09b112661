use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kreal::algebraic::{Polynomial, RootIsolator};
use kreal::creal::{compare, CauchyReal, CompareResult, OrderCertificate};
use kreal::lexp::check::{check_sentence_with, CheckOptions, Verdict, WitnessSource};
use kreal::lexp::eval::{eval_term, RealEnv};
use kreal::lexp::{parse_sentence, parse_term_in};
use kreal::numeric::{Int, Nat, Rational};
use kreal::Error;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Exact real arithmetic from the command line.
#[derive(Parser, Debug)]
#[command(name = "kreal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Decimal digits after the point.
    #[arg(long, global = true, default_value_t = 10)]
    digits: u32,
    /// Comparison fuel: indices 2^0 .. 2^fuel are tried.
    #[arg(long, global = true, default_value_t = 64)]
    fuel: u32,
    /// Checker precision budget.
    #[arg(long, global = true, default_value_t = 16)]
    budget: u32,
    /// Number of universal samples for `check`.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a closed term to a decimal with a guaranteed error bound.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Integer part of a closed term.
    Floor {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Certified comparison of two closed terms.
    Compare {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Real root of an odd-degree polynomial.
    Root {
        /// Coefficients, constant term first, separated by spaces.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Search witnesses for a forall-exists sentence.
    Check { sentence: String },
}

#[derive(Debug)]
enum Failure {
    Error(String),
    Unknown(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownAtFuel { .. } | Error::FuelExhausted { .. } => Failure::Unknown(e.to_string()),
            e => Failure::Error(e.to_string()),
        }
    }
}

/// What a command prints: human text and its JSON form.
struct Report {
    text: String,
    json: Value,
    unknown: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json values serialize"));
            } else {
                println!("{}", r.text);
            }
            if r.unknown {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Unknown(msg)) => {
            if cli.json {
                println!("{}", json!({ "result": "unknown", "reason": msg }));
            } else {
                eprintln!("unknown: {msg}");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Eval { expr } => eval(expr, cli.digits),
        Command::Floor { expr } => floor(expr, cli.fuel),
        Command::Compare { left, right } => cmp(left, right, cli.fuel),
        Command::Root { coeffs } => root(coeffs, cli.digits, cli.fuel),
        Command::Check { sentence } => check(sentence, cli.budget, cli.samples),
    }
}

fn closed(expr: &str) -> Result<CauchyReal, Failure> {
    let t = parse_term_in(expr, &[])?;
    Ok(eval_term(&t, &RealEnv::new())?)
}

fn ten_pow(d: u32) -> Int {
    num_traits::pow(Int::from(10), d as usize)
}

/// `x` truncated toward zero to `digits` places, printed in full.
fn truncated(x: &Rational, digits: u32) -> (Rational, String) {
    let scale = ten_pow(digits);
    let units = (x * &scale).trunc().to_integer();
    let t = Rational::new(units.clone(), scale);
    let mag = units.abs().to_string();
    let mag = format!("{mag:0>width$}", width = digits as usize + 1);
    let (int, frac) = mag.split_at(mag.len() - digits as usize);
    let sign = if units.is_negative() || (units.is_zero() && x.is_negative()) { "-" } else { "" };
    let body = if digits == 0 { int.to_string() } else { format!("{int}.{frac}") };
    (t, format!("{sign}{body}"))
}

/// Decimal for a value known to lie in `[center - radius, center + radius]`.
/// The bound is `k * 10^-digits` with the least `k >= 1` that covers the interval.
fn decimal(center: &Rational, radius: &Rational, digits: u32) -> (String, String, Rational) {
    let (t, text) = truncated(center, digits);
    let worst = (center - &t).abs() + radius;
    let scale = Rational::from_integer(ten_pow(digits));
    let k = (worst * &scale).ceil().to_integer().max(Int::one());
    let bound = format!("{k}e-{digits}");
    (text, bound, Rational::new(k, ten_pow(digits)))
}

fn eval(expr: &str, digits: u32) -> Result<Report, Failure> {
    let x = closed(expr)?;
    let n = Nat::from(100u32) * ten_pow(digits).to_biguint().expect("positive");
    let (center, radius) = match x.exact() {
        Some(q) => (q.clone(), Rational::zero()),
        None => (x.approx(&n), Rational::new(Int::one(), Int::from(n.clone()))),
    };
    let (text, bound, _) = decimal(&center, &radius, digits);
    Ok(Report {
        text: format!("{text} ± {bound}"),
        json: json!({
            "value": text,
            "bound": bound,
            "approximation": center.to_string(),
            "index": if x.exact().is_some() { Value::Null } else { Value::String(n.to_string()) },
            "exact": x.exact().is_some(),
        }),
        unknown: false,
    })
}

fn floor(expr: &str, fuel: u32) -> Result<Report, Failure> {
    let k = closed(expr)?.floor(fuel)?;
    Ok(Report { text: k.to_string(), json: json!({ "floor": k.to_string() }), unknown: false })
}

fn cert_json(c: &OrderCertificate) -> Value {
    json!({ "m": c.m.to_string(), "k": c.index.to_string() })
}

fn cmp(left: &str, right: &str, fuel: u32) -> Result<Report, Failure> {
    let (x, y) = (closed(left)?, closed(right)?);
    let report = |word: &str, c: &OrderCertificate| Report {
        text: format!("{word} (certificate: m={}, k={})", c.m, c.index),
        json: json!({ "result": word, "certificate": cert_json(c) }),
        unknown: false,
    };
    Ok(match compare(&x, &y, fuel) {
        CompareResult::Less(c) => report("less", &c),
        CompareResult::Greater(c) => report("greater", &c),
        CompareResult::UnknownAtFuel(f) => Report {
            text: format!("unknown at fuel {f}"),
            json: json!({ "result": "unknown", "fuel": f }),
            unknown: true,
        },
    })
}

fn root(coeffs: &str, digits: u32, fuel: u32) -> Result<Report, Failure> {
    let cs = coeffs
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Rational>().map_err(|_| Failure::Error(format!("bad coefficient `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let p = Polynomial::from_rationals(&cs)?;
    let iso = RootIsolator::new(&p, fuel)?;
    let n = Nat::from(100u32) * ten_pow(digits).to_biguint().expect("positive");
    let b = iso.bracket_for(&n)?;
    let (text, bound, _) = decimal(&b.midpoint(), &(b.width() / Int::from(2)), digits);
    Ok(Report {
        text: format!("{text} ± {bound}"),
        json: json!({
            "value": text,
            "bound": bound,
            "bracket": [b.lo.to_string(), b.hi.to_string()],
        }),
        unknown: false,
    })
}

fn assignment(xs: &[(String, Rational)]) -> Value {
    xs.iter().map(|(v, q)| (v.clone(), Value::String(q.to_string()))).collect::<serde_json::Map<_, _>>().into()
}

fn verdict_json(v: &Verdict) -> Value {
    let rows = |rows: &[kreal::lexp::check::WitnessRow]| -> Value {
        rows.iter()
            .map(|r| {
                json!({
                    "sample": r.sample,
                    "universal": assignment(&r.outer),
                    "witness": assignment(&r.witness),
                    "disjunct": r.conjunct,
                    "certificates": r.certs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "source": match &r.source {
                        WitnessSource::Enumeration { rank } => json!({ "enumeration": rank }),
                        WitnessSource::Refinement { radius, subbox } => json!({ "radius": radius, "subbox": subbox.to_string() }),
                    },
                })
            })
            .collect()
    };
    match v {
        Verdict::Refuted { sample, counterexample, exclusions } => json!({
            "verdict": "Refuted",
            "sample": sample,
            "counterexample": assignment(counterexample),
            "exclusions": exclusions.len(),
        }),
        Verdict::WitnessFound { rows: r } => json!({ "verdict": "WitnessFound", "rows": rows(r) }),
        Verdict::Unknown { rows: r, unresolved } => json!({
            "verdict": "Unknown",
            "rows": rows(r),
            "unresolved": unresolved.iter().map(|u| assignment(u)).collect::<Vec<_>>(),
        }),
    }
}

fn check(src: &str, budget: u32, samples: usize) -> Result<Report, Failure> {
    let s = parse_sentence(src)?;
    let v = check_sentence_with(&s, &CheckOptions::new(budget, samples))?;
    let mut json = verdict_json(&v);
    json["semantics"] = Value::String(v.semantics().to_string());
    Ok(Report { text: v.to_string(), unknown: matches!(v, Verdict::Unknown { .. }), json })
}
