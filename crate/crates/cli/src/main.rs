//! Command-line surface for the polynomial/integral-sequence library:
//! closed-form evaluation, nested-sum counting, quadrature-backed
//! interpolation, and the verification suites. Output is one record per
//! result, as aligned text or as JSON objects (one per line).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::json;

use sechint_core::closed_forms::{
    barnes_residue, barnes_residue_numeric, barnes_zeta, delta_seq, f_seq, lambda_seq, malmsten,
};
use sechint_core::error::Error;
use sechint_core::nested_sums::{
    coeffs, integrand_from_coeffs, rhs_closed_form, rhs_symbolic, ClosedKind, LowerBounds,
};
use sechint_core::precision::{HPReal, PrecisionContext};
use sechint_core::quadrature::chi_interpolated;
use sechint_core::stirling_poly::{p_eval, p_family, Construction};
use sechint_core::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(
    name = "sechint",
    version,
    about = "Signed generalized Stirling polynomials and hyperbolic-secant integral sequences"
)]
struct Cli {
    /// Decimal digits for numeric output (env: SECHINT_DIGITS)
    #[arg(long, global = true, env = "SECHINT_DIGITS", default_value_t = 40)]
    digits: u32,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Signed generalized Stirling polynomial P_k(m, x)
    Poly {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Optional rational evaluation point (p/q)
        #[arg(long)]
        x: Option<String>,
    },
    /// Closed form of the Malmsten integral int log(ax) sech^n(bx) dx
    Malmsten {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "1")]
        b: String,
    },
    /// Closed form F_j of chi_j = int (sech x - sech^j x)/x^2 dx
    #[command(alias = "chi")]
    Fseq {
        #[arg(long)]
        j: u32,
    },
    /// lambda_n = int tanh(x) sech^n(x)/x dx by its closed form
    Lambda {
        #[arg(long)]
        n: u32,
    },
    /// delta_n = int (1 - sech x) sech^n(x)/x^2 dx by its closed form
    Delta {
        #[arg(long)]
        n: u32,
    },
    /// Equal-period Barnes multiple zeta via the Hurwitz reduction
    Barnes {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: String,
        #[arg(long)]
        x: String,
    },
    /// Residue of the Barnes zeta at s = m+1-k (exact rational)
    Residue {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: String,
        /// Also extract the residue numerically by pole extrapolation
        #[arg(long)]
        numeric: bool,
    },
    /// Nested-sum multiplicities, integrand, and right-hand sides
    Nested {
        #[command(subcommand)]
        what: NestedCmd,
    },
    /// Normalized limiting series of the two closed families
    Limits {
        #[command(subcommand)]
        which: LimitsCmd,
    },
    /// Interpolated chi(s) by double-exponential quadrature (real s > 0)
    Chis {
        #[arg(long)]
        s: String,
    },
    /// Run a verification suite and report each check
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum NestedCmd {
    /// Multiplicities (c_1, ..., c_N)
    Coeffs(NestedArgs),
    /// Integrand polynomial in sech x
    Integrand(NestedArgs),
    /// Evaluated right-hand side sum c_j F_j
    Rhs(NestedArgs),
    /// Symbolic right-hand side in F[j]
    Symbolic(NestedArgs),
}

#[derive(Args)]
struct NestedArgs {
    /// Nesting depth
    #[arg(long = "N")]
    n: usize,
    /// Comma-separated lower bounds l_1,...,l_N
    #[arg(long, value_delimiter = ',')]
    lows: Vec<u32>,
}

#[derive(Subcommand)]
enum LimitsCmd {
    /// Common-lower-bound family: sum_r 2^-(r+1) F_{m+r}
    Common {
        #[arg(long)]
        m: u32,
    },
    /// Staircase family: sum_j (j/2^(j+1)) F_j
    Staircase,
}

#[derive(Serialize)]
struct OutputRecord {
    command: String,
    inputs: serde_json::Value,
    value: String,
    error_bound: String,
    digits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbolic: Option<String>,
}

fn emit(rec: &OutputRecord, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(rec).expect("serialize")),
        Format::Text => {
            println!("command: {}", rec.command);
            println!("inputs: {}", rec.inputs);
            println!("value: {}", rec.value);
            println!("error_bound: {}", rec.error_bound);
            println!("digits: {}", rec.digits);
            if let Some(sym) = &rec.symbolic {
                println!("symbolic: {sym}");
            }
        }
    }
}

fn record_for(
    command: &str,
    inputs: serde_json::Value,
    value: &HPReal,
    digits: u32,
    symbolic: Option<String>,
) -> OutputRecord {
    OutputRecord {
        command: command.to_string(),
        inputs,
        value: value.to_decimal_string(digits),
        error_bound: value.error_bound_string(),
        digits,
        symbolic,
    }
}

/// Parse "p/q", plain integers, or decimal strings into an exact rational.
fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = |_e: rug::integer::ParseIntegerError| Error::Domain(format!("malformed rational '{s}'"));
    if let Some((num, den)) = s.split_once('/') {
        let n: Integer = num.trim().parse().map_err(bad)?;
        let d: Integer = den.trim().parse().map_err(bad)?;
        if d.cmp0() == std::cmp::Ordering::Equal {
            return Err(Error::Domain(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::from((n, d)));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.trim();
        let mut joined = String::from(int_part.trim());
        joined.push_str(digits);
        let n: Integer = joined.parse().map_err(bad)?;
        let d = rug::ops::Pow::pow(Integer::from(10), digits.len() as u32);
        return Ok(Rational::from((n, d)));
    }
    let n: Integer = s.trim().parse().map_err(bad)?;
    Ok(Rational::from(n))
}

fn run(cli: Cli) -> Result<bool, Error> {
    let ctx = PrecisionContext::new(cli.digits)?;
    let digits = cli.digits;
    let format = cli.format;
    match cli.command {
        Command::Poly { k, m, x } => match x {
            None => {
                let fam = p_family(m, Construction::Step)?;
                if k > m {
                    return Err(Error::Domain(format!("k = {k} outside 0..={m}")));
                }
                let poly = fam.poly(k).to_string();
                emit(
                    &OutputRecord {
                        command: "poly".into(),
                        inputs: json!({"k": k, "m": m}),
                        value: poly.clone(),
                        error_bound: "0".into(),
                        digits,
                        symbolic: Some(poly),
                    },
                    format,
                );
            }
            Some(xs) => {
                let xq = parse_rational(&xs)?;
                let v = p_eval(k, m, &xq)?;
                let hv = HPReal::from_rational(&v, &ctx);
                emit(
                    &record_for(
                        "poly",
                        json!({"k": k, "m": m, "x": xq.to_string()}),
                        &hv,
                        digits,
                        Some(v.to_string()),
                    ),
                    format,
                );
            }
        },
        Command::Malmsten { n, a, b } => {
            let aq = parse_rational(&a)?;
            let bq = parse_rational(&b)?;
            let ah = HPReal::from_rational(&aq, &ctx);
            let bh = HPReal::from_rational(&bq, &ctx);
            let rep = malmsten(n, &ah, &bh, &ctx)?;
            emit(
                &record_for(
                    "malmsten",
                    json!({"n": n, "a": aq.to_string(), "b": bq.to_string()}),
                    &rep.value,
                    digits,
                    None,
                ),
                format,
            );
        }
        Command::Fseq { j } => {
            let rep = f_seq(j, &ctx)?;
            emit(
                &record_for("fseq", json!({"j": j}), &rep.value, digits, None),
                format,
            );
        }
        Command::Lambda { n } => {
            let v = lambda_seq(n, &ctx)?;
            emit(&record_for("lambda", json!({"n": n}), &v, digits, None), format);
        }
        Command::Delta { n } => {
            let v = delta_seq(n, &ctx)?;
            emit(&record_for("delta", json!({"n": n}), &v, digits, None), format);
        }
        Command::Barnes { n, s, x } => {
            let sq = parse_rational(&s)?;
            let xq = parse_rational(&x)?;
            let sh = HPReal::from_rational(&sq, &ctx);
            let xh = HPReal::from_rational(&xq, &ctx);
            let v = barnes_zeta(n, &sh, &xh, &ctx)?;
            emit(
                &record_for(
                    "barnes",
                    json!({"n": n, "s": sq.to_string(), "x": xq.to_string()}),
                    &v,
                    digits,
                    None,
                ),
                format,
            );
        }
        Command::Residue { m, k, x, numeric } => {
            let xq = parse_rational(&x)?;
            let exact = barnes_residue(m, k, &xq)?;
            let hv = HPReal::from_rational(&exact, &ctx);
            emit(
                &record_for(
                    "residue",
                    json!({"m": m, "k": k, "x": xq.to_string()}),
                    &hv,
                    digits,
                    Some(exact.to_string()),
                ),
                format,
            );
            if numeric {
                let nv = barnes_residue_numeric(m, k, &xq, &ctx)?;
                emit(
                    &record_for(
                        "residue-numeric",
                        json!({"m": m, "k": k, "x": xq.to_string()}),
                        &nv,
                        digits,
                        None,
                    ),
                    format,
                );
            }
        }
        Command::Nested { what } => {
            let (name, args) = match &what {
                NestedCmd::Coeffs(a) => ("nested coeffs", a),
                NestedCmd::Integrand(a) => ("nested integrand", a),
                NestedCmd::Rhs(a) => ("nested rhs", a),
                NestedCmd::Symbolic(a) => ("nested symbolic", a),
            };
            if args.lows.len() != args.n {
                return Err(Error::Domain(format!(
                    "--lows has {} entries but --N is {}",
                    args.lows.len(),
                    args.n
                )));
            }
            let lows = LowerBounds::new(args.lows.clone())?;
            let inputs = json!({"N": args.n, "lows": args.lows});
            match what {
                NestedCmd::Coeffs(_) => {
                    let c = coeffs(&lows)?;
                    let list = c
                        .as_slice()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    let total = HPReal::from_rational(&Rational::from(c.total()), &ctx);
                    emit(
                        &record_for(name, inputs, &total, digits, Some(list)),
                        format,
                    );
                }
                NestedCmd::Integrand(_) => {
                    let ip = integrand_from_coeffs(coeffs(&lows)?);
                    let total = HPReal::from_rational(&Rational::from(ip.total.clone()), &ctx);
                    emit(
                        &record_for(name, inputs, &total, digits, Some(ip.symbolic())),
                        format,
                    );
                }
                NestedCmd::Rhs(_) => {
                    let c = coeffs(&lows)?;
                    let rep = rhs_closed_form(&lows, &ctx)?;
                    emit(
                        &record_for(name, inputs, &rep.value, digits, Some(rhs_symbolic(&c))),
                        format,
                    );
                }
                NestedCmd::Symbolic(_) => {
                    let c = coeffs(&lows)?;
                    let sym = rhs_symbolic(&c);
                    emit(
                        &OutputRecord {
                            command: name.into(),
                            inputs,
                            value: sym.clone(),
                            error_bound: "0".into(),
                            digits,
                            symbolic: Some(sym),
                        },
                        format,
                    );
                }
            }
        }
        Command::Limits { which } => {
            let (kind, inputs) = match which {
                LimitsCmd::Common { m } => {
                    (ClosedKind::Common { m }, json!({"family": "common", "m": m}))
                }
                LimitsCmd::Staircase => (ClosedKind::Staircase, json!({"family": "staircase"})),
            };
            let eps = HPReal::from_rational(
                &Rational::from((
                    Integer::from(1),
                    rug::ops::Pow::pow(Integer::from(10), digits + 4),
                )),
                &ctx,
            );
            let v = sechint_core::nested_sums::normalized_series(kind, &ctx, &eps)?;
            emit(&record_for("limits", inputs, &v, digits, None), format);
        }
        Command::Chis { s } => {
            let sq = parse_rational(&s)?;
            let sh = HPReal::from_rational(&sq, &ctx);
            let v = chi_interpolated(&sh, &ctx)?;
            emit(
                &record_for("chis", json!({"s": sq.to_string()}), &v, digits, None),
                format,
            );
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let results = run_suite(suite, &ctx)?;
            let mut all_ok = true;
            for r in &results {
                all_ok &= r.passed;
                match format {
                    Format::Text => println!("{}", r.line()),
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string(&json!({
                            "command": "verify",
                            "check": r.name,
                            "passed": r.passed,
                            "achieved_digits": r.achieved_digits,
                            "required_digits": r.required_digits,
                            "detail": r.detail,
                            "digits": digits,
                        }))
                        .expect("serialize")
                    ),
                }
            }
            let passed = results.iter().filter(|r| r.passed).count();
            match format {
                Format::Text => println!("verify: {passed}/{} checks passed", results.len()),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&json!({
                        "command": "verify-summary",
                        "passed": passed,
                        "total": results.len(),
                        "digits": digits,
                    }))
                    .expect("serialize")
                ),
            }
            return Ok(all_ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Domain(_) | Error::Capacity(_) => ExitCode::from(2),
                Error::Precision { .. } | Error::Diagnostics(_) => ExitCode::from(3),
            }
        }
    }
}
