//! Report rows and their table, CSV and JSON renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use sfseries::{CheckReport, Verification};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// The `verify` report; field names and order are part of the interface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub family: String,
    pub nu: u32,
    pub b: Option<String>,
    pub n_terms: u64,
    pub partial_sum: f64,
    pub tail_estimate: f64,
    pub total: f64,
    pub rhs_exact: String,
    pub rhs_float: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub converged: bool,
    pub mode: String,
    pub elapsed_ms: f64,
}

impl From<&Verification> for VerifyJson {
    fn from(v: &Verification) -> Self {
        let r = &v.report;
        VerifyJson {
            family: v.spec.family.to_string(),
            nu: v.spec.nu,
            b: v.spec.b.as_ref().map(|b| b.to_string()),
            n_terms: r.terms_used,
            partial_sum: r.partial_sum,
            tail_estimate: r.tail_estimate,
            total: r.total,
            rhs_exact: v.rhs_exact.clone(),
            rhs_float: v.rhs_float,
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            converged: r.converged,
            mode: r.mode.to_string(),
            elapsed_ms: r.elapsed_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: String,
    pub nu: u32,
    pub b: Option<String>,
    pub rhs_exact: String,
    pub rhs_float: f64,
    pub total: f64,
    pub n_terms: u64,
    pub rel_err: f64,
    pub derived_matches: Option<bool>,
    pub converged: bool,
    pub pass: bool,
}

impl From<&Verification> for TableRow {
    fn from(v: &Verification) -> Self {
        TableRow {
            family: v.spec.family.to_string(),
            nu: v.spec.nu,
            b: v.spec.b.as_ref().map(|b| b.to_string()),
            rhs_exact: v.rhs_exact.clone(),
            rhs_float: v.rhs_float,
            total: v.report.total,
            n_terms: v.report.terms_used,
            rel_err: v.report.rel_err,
            derived_matches: v.derived_matches,
            converged: v.report.converged,
            pass: v.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub id: String,
    pub point: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl From<&CheckReport> for CheckRow {
    fn from(c: &CheckReport) -> Self {
        CheckRow {
            id: c.id.to_string(),
            point: c.point.clone(),
            lhs: c.lhs,
            rhs: c.rhs,
            rel_err: c.rel_err,
            tolerance: c.tolerance,
            pass: c.pass,
            note: c.note.clone(),
        }
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn opt_bool(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

fn csv_string<S: Serialize>(rows: &[S]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("row serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn json_string<S: Serialize>(rows: &[S]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render_table(rows: &[TableRow], format: Format) -> String {
    match format {
        Format::Csv => csv_string(rows),
        Format::Json => json_string(rows),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:>3}  {:<26}  {:>24}  {:>24}  {:>9}  {:>7}  {:>7}  status",
                "nu", "rhs (exact)", "rhs", "sum", "rel err", "terms", "derived"
            );
            for r in rows {
                let rhs = if r.rhs_exact.len() > 26 { format!("{}...", &r.rhs_exact[..23]) } else { r.rhs_exact.clone() };
                let _ = writeln!(
                    out,
                    "{:>3}  {:<26}  {:>24}  {:>24}  {:>9.2e}  {:>7}  {:>7}  {}",
                    r.nu,
                    rhs,
                    r.rhs_float,
                    r.total,
                    r.rel_err,
                    r.n_terms,
                    opt_bool(r.derived_matches),
                    status(r.pass)
                );
            }
            out
        }
    }
}

pub fn render_checks(rows: &[CheckRow], format: Format) -> String {
    match format {
        Format::Csv => csv_string(rows),
        Format::Json => json_string(rows),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "{:<4} {:<24} {:>24} {:>24} {:>9}  status", "id", "point", "lhs", "rhs", "rel err");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{:<4} {:<24} {:>24} {:>24} {:>9.2e}  {}",
                    r.id,
                    r.point,
                    r.lhs,
                    r.rhs,
                    r.rel_err,
                    status(r.pass)
                );
                if let Some(n) = &r.note {
                    if r.id == "A5" || r.id == "A3" || !r.pass {
                        let _ = writeln!(out, "     note: {n}");
                    }
                }
            }
            let failed = rows.iter().filter(|r| !r.pass).count();
            let _ = writeln!(out, "{} checks, {} failed", rows.len(), failed);
            out
        }
    }
}

pub fn render_plot(points: &[(f64, f64)]) -> String {
    #[derive(Serialize)]
    struct Sample {
        x: f64,
        psi: f64,
    }
    let rows: Vec<Sample> = points.iter().map(|&(x, psi)| Sample { x, psi }).collect();
    csv_string(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sfseries::identities::verify_identity;
    use sfseries::{Family, IdentitySpec};

    #[test]
    fn verify_json_round_trips_every_field() {
        for (family, nu, b) in [(Family::F1, 3, None), (Family::F2, 5, Some((1, 2))), (Family::F3, 2, None)] {
            let b = b.map(|(n, d)| num_rational::BigRational::new(n.into(), d.into()));
            let spec = IdentitySpec::new(family, nu, b).unwrap();
            let v = verify_identity(&spec, 1e-6).unwrap();
            let json = VerifyJson::from(&v);
            let text = serde_json::to_string(&json).unwrap();
            assert_eq!(serde_json::from_str::<VerifyJson>(&text).unwrap(), json);
        }
    }

    #[test]
    fn plot_csv_uses_lf_and_header() {
        let s = render_plot(&[(0.0, 1.5), (0.5, -2.25e-7)]);
        assert_eq!(s, "x,psi\n0.0,1.5\n0.5,-2.25e-7\n");
    }
}
