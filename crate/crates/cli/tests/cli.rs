use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfseries"))
        .args(args)
        .env_remove("SFSERIES_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn csv_samples(text: &str) -> Vec<(f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,psi"));
    lines
        .map(|l| {
            let (x, p) = l.split_once(',').expect("two columns");
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect()
}

#[test]
fn unknown_table_is_usage_error() {
    assert_eq!(code(&run(&["table", "--id", "9"])), 2);
}

#[test]
fn table_four_without_b_is_usage_error() {
    assert_eq!(code(&run(&["table", "--id", "4"])), 2);
}

#[test]
fn low_precision_is_usage_error() {
    assert_eq!(code(&run(&["--precision", "8", "table", "--id", "1"])), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_sfseries"))
        .args(["table", "--id", "1"])
        .env("SFSERIES_PRECISION", "12")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_appendix_check_is_usage_error() {
    assert_eq!(code(&run(&["appendix", "--check", "A12"])), 2);
}

#[test]
fn small_budget_is_nonconvergence() {
    let out = run(&["verify", "--family", "f3", "--nu", "1", "--max-terms", "10"]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["converged"], Value::Bool(false));
}

#[test]
fn loose_sum_against_tight_tolerance_fails() {
    // The sum converges but cannot reach an impossible tolerance.
    let out = run(&["verify", "--family", "f4", "--nu", "1", "--tol", "1e-17"]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
}

#[test]
fn table_two_passes() {
    let out = run(&["table", "--id", "2"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 11);
}

#[test]
fn table_four_csv_has_header_and_rows() {
    let out = run(&["table", "--id", "4", "--b", "1/2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    let headers = rdr.headers().unwrap().clone();
    let pass = headers.iter().position(|h| h == "pass").unwrap();
    assert!(rows.iter().all(|r| &r[pass] == "true"));
}

#[test]
fn verify_json_round_trips() {
    let out = run(&["verify", "--family", "f2", "--nu", "3", "--b", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec![
        "family", "nu", "b", "n_terms", "partial_sum", "tail_estimate", "total", "rhs_exact", "rhs_float", "abs_err",
        "rel_err", "converged", "mode", "elapsed_ms",
    ];
    let mut got = keys.clone();
    got.sort_unstable();
    expected.sort_unstable();
    assert_eq!(got, expected);
    let again = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&again).unwrap(), v);
    assert_eq!(v["b"], Value::String("2".into()));
    assert_eq!(v["mode"], Value::String("exact".into()));
    let total = v["total"].as_f64().unwrap();
    let rhs = v["rhs_float"].as_f64().unwrap();
    assert!((total - rhs).abs() <= 1e-9 * rhs);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["table", "--id", "1", "--format", "csv"][..],
        &["table", "--id", "4", "--b", "2", "--format", "json"][..],
        &["appendix", "--check", "A4", "--format", "json"][..],
        &["plotdata", "--which", "fig1d", "--samples", "33"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_reruns_match_apart_from_timing() {
    let strip = |out: Output| {
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let args = ["verify", "--family", "f1", "--nu", "4"];
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn fig1b_starts_at_nonzero_value() {
    let out = run(&["plotdata", "--which", "fig1b", "--samples", "5"]);
    assert_eq!(code(&out), 0);
    let s = csv_samples(&stdout(&out));
    assert_eq!(s.len(), 5);
    let pi = std::f64::consts::PI;
    let expected = (2.0 * 3f64.sqrt() / pi.sqrt()).sqrt();
    assert_eq!(s[0].0, 0.0);
    assert!((s[0].1 - expected).abs() < 1e-14);
    assert_eq!(s[4].0, 4.0);
}

#[test]
fn fig1c_vanishes_at_wall() {
    let s = csv_samples(&stdout(&run(&["plotdata", "--which", "fig1c", "--samples", "11"])));
    assert_eq!(s.last().unwrap().0, 1.0);
    assert_eq!(s.last().unwrap().1, 0.0);
}

#[test]
fn fig1a_peaks_near_inverse_root_three() {
    let s = csv_samples(&stdout(&run(&["plotdata", "--which", "fig1a", "--samples", "4001"])));
    let (x, _) = s.iter().copied().fold((0.0, f64::MIN), |best, p| if p.1 > best.1 { p } else { best });
    assert!((x - 1.0 / 3f64.sqrt()).abs() <= 1e-3, "peak at {x}");
}

#[test]
fn plotdata_rejects_single_sample() {
    assert_eq!(code(&run(&["plotdata", "--which", "fig1a", "--samples", "1"])), 2);
}

#[test]
fn appendix_a5_reports_half_line_note() {
    let out = run(&["appendix", "--check", "a5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = v.as_array().unwrap();
    assert!(!arr.is_empty());
    for r in arr {
        assert_eq!(r["id"], Value::String("A5".into()));
        assert!(r["note"].as_str().unwrap().contains("half-line"));
    }
}
