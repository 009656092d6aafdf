//! `sfseries`: reproduce the identity tables, appendix checks and figure data.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;

use sfseries::identities::{
    appendix_check, appendix_suite, default_mode, default_policy, default_tolerance, table_rows, verify_with,
};
use sfseries::{CheckId, CheckReport, Family, IdentitySpec, SumMode, TrialFamily, Verification};

use output::{CheckRow, Format, TableRow, VerifyJson};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NONCONVERGED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sfseries", version, about = "Verify series identities from eigenbasis expansions")]
struct Cli {
    /// Decimal digits used to render exact right-hand sides (at least 16).
    #[arg(long, global = true, env = "SFSERIES_PRECISION", default_value_t = 34)]
    precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reproduce one of the four tables.
    Table(TableArgs),
    /// Verify a single identity and print a JSON report.
    Verify(VerifyArgs),
    /// Run the appendix identity checks.
    Appendix(AppendixArgs),
    /// Sample a trial function of the figure as CSV.
    Plotdata(PlotArgs),
}

#[derive(Args, Debug, Clone)]
struct SumOverrides {
    /// Relative tolerance (defaults per family).
    #[arg(long)]
    tol: Option<f64>,
    /// Term budget.
    #[arg(long)]
    max_terms: Option<u64>,
    /// Summation mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for SumMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SumMode::ExactRational,
            ModeArg::Float => SumMode::FloatCompensated,
        }
    }
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Table number, 1 to 4.
    #[arg(long)]
    id: u8,
    /// b for table 4, as a rational such as 1/2.
    #[arg(long)]
    b: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(flatten)]
    overrides: SumOverrides,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    nu: u32,
    /// b for F2, as a rational.
    #[arg(long)]
    b: Option<String>,
    /// Well width for the derived right-hand side of F3/F4.
    #[arg(long, default_value = "1")]
    a: String,
    #[command(flatten)]
    overrides: SumOverrides,
}

#[derive(Args, Debug)]
struct AppendixArgs {
    /// Check id (A1..A11) or `all`.
    #[arg(long, default_value = "all")]
    check: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Figure {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long, value_enum)]
    which: Figure,
    /// Number of equally spaced samples, including both ends.
    #[arg(long, default_value_t = 201)]
    samples: usize,
}

struct UsageError(String);

type CmdResult = Result<u8, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn parse_rational(s: &str, name: &str) -> Result<BigRational, UsageError> {
    let bad = || usage(format!("--{name} expects a positive rational like 1/2, got `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n = num_bigint::BigInt::from_str(n).map_err(|_| bad())?;
    let d = num_bigint::BigInt::from_str(d).map_err(|_| bad())?;
    if d == 0.into() {
        return Err(bad());
    }
    let q = BigRational::new(n, d);
    if q <= BigRational::from_integer(0.into()) {
        return Err(bad());
    }
    Ok(q)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.precision < 16 {
        eprintln!("error: --precision must be at least 16 digits");
        return ExitCode::from(EXIT_USAGE);
    }
    let result = match cli.command {
        Command::Table(a) => cmd_table(a, cli.precision),
        Command::Verify(a) => cmd_verify(a, cli.precision),
        Command::Appendix(a) => cmd_appendix(a),
        Command::Plotdata(a) => cmd_plotdata(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run_one(spec: &IdentitySpec, o: &SumOverrides, digits: u32) -> Result<Verification, UsageError> {
    let mode = o.mode.map(SumMode::from).unwrap_or_else(|| default_mode(spec.family));
    if mode == SumMode::ExactRational && matches!(spec.family, Family::F3 | Family::F4) {
        return Err(usage(format!("{} has no exact mode", spec.family)));
    }
    let mut policy = default_policy(spec.family, spec.nu, mode);
    if let Some(m) = o.max_terms {
        if m == 0 {
            return Err(usage("--max-terms must be positive"));
        }
        policy.max_terms = m;
    }
    let tol = o.tol.unwrap_or_else(|| default_tolerance(spec.family));
    if !(tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    verify_with(spec, &policy, tol, digits).map_err(|e| usage(e.to_string()))
}

fn exit_for(results: &[Verification]) -> u8 {
    if results.iter().any(Verification::non_converged) {
        EXIT_NONCONVERGED
    } else if results.iter().all(|v| v.pass) {
        0
    } else {
        EXIT_FAIL
    }
}

fn cmd_table(a: TableArgs, digits: u32) -> CmdResult {
    let (family, nus) = table_rows(a.id).map_err(|e| usage(e.to_string()))?;
    let b = match (&a.b, family) {
        (Some(s), Family::F2) => Some(parse_rational(s, "b")?),
        (None, Family::F2) => return Err(usage("table 4 needs --b")),
        (Some(_), _) => return Err(usage("--b only applies to table 4")),
        (None, _) => None,
    };
    let specs = nus
        .iter()
        .map(|&nu| IdentitySpec::new(family, nu, b.clone()).map_err(|e| usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let results = specs
        .par_iter()
        .map(|s| run_one(s, &a.overrides, digits))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<TableRow> = results.iter().map(TableRow::from).collect();
    print!("{}", output::render_table(&rows, a.format));
    Ok(exit_for(&results))
}

fn cmd_verify(a: VerifyArgs, digits: u32) -> CmdResult {
    let family: Family = a.family.parse().map_err(|e: sfseries::Error| usage(e.to_string()))?;
    let b = match (&a.b, family) {
        (Some(s), Family::F2) => Some(parse_rational(s, "b")?),
        (None, Family::F2) => return Err(usage("F2 needs --b")),
        (Some(_), _) => return Err(usage("--b only applies to f2")),
        (None, _) => None,
    };
    let width = parse_rational(&a.a, "a")?;
    let spec = IdentitySpec::with_width(family, a.nu, b, width).map_err(|e| usage(e.to_string()))?;
    let v = run_one(&spec, &a.overrides, digits)?;
    let json = VerifyJson::from(&v);
    println!("{}", serde_json::to_string_pretty(&json).expect("report serializes"));
    Ok(exit_for(std::slice::from_ref(&v)))
}

fn cmd_appendix(a: AppendixArgs) -> CmdResult {
    let reports: Vec<CheckReport> = if a.check.eq_ignore_ascii_case("all") {
        appendix_suite()
    } else {
        let id: CheckId = a.check.parse().map_err(|e: sfseries::Error| usage(e.to_string()))?;
        appendix_check(id)
    };
    let rows: Vec<CheckRow> = reports.iter().map(CheckRow::from).collect();
    print!("{}", output::render_checks(&rows, a.format));
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { EXIT_FAIL })
}

fn cmd_plotdata(a: PlotArgs) -> CmdResult {
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let one = BigRational::from_integer(1.into());
    let (family, lo, hi) = match a.which {
        Figure::Fig1a => (TrialFamily::f1(1), 0.0, 4.0),
        Figure::Fig1b => (TrialFamily::f1(0), 0.0, 4.0),
        Figure::Fig1c => (TrialFamily::f3(1, one).map_err(|e| usage(e.to_string()))?, 0.0, 1.0),
        Figure::Fig1d => (TrialFamily::f4(1, one).map_err(|e| usage(e.to_string()))?, 0.0, 1.0),
    };
    let f = sfseries::qmodels::TrialFunction::new(family).map_err(|e| usage(e.to_string()))?;
    let last = a.samples - 1;
    let mut points = Vec::with_capacity(a.samples);
    for i in 0..a.samples {
        let x = if i == last { hi } else { lo + (hi - lo) * i as f64 / last as f64 };
        let psi = f.eval(x).map_err(|e| usage(e.to_string()))?;
        points.push((x, psi));
    }
    print!("{}", output::render_plot(&points));
    Ok(0)
}
