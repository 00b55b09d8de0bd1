use std::process::Command;

use serde_json::Value;

fn palindist(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_palindist"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = palindist(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn count_csv_has_three_rows_summing_to_90() {
    let (code, out, _) = palindist(&["count", "--base", "10", "--length", "3", "--mod", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let col = rdr.headers().unwrap().iter().position(|h| h == "count").unwrap();
    let counts: Vec<u64> = rdr.records().map(|r| r.unwrap()[col].parse().unwrap()).collect();
    assert_eq!(counts, vec![30, 30, 30]);
}

#[test]
fn lemma21_sweep_is_satisfied_everywhere() {
    let report = json(&["verify", "lemma21", "--base", "2", "--qmax", "300"]);
    let rows = report["rows"].as_array().unwrap();
    assert!(rows.len() > 100);
    assert!(rows.iter().all(|r| r["satisfied"] == true && r["violations"] == 0));
    let qs: Vec<u64> = rows.iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert!(qs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn census_below_100() {
    let report = json(&["census", "--base", "10", "--x", "100"]);
    assert_eq!(report["params"]["prime_palindrome_count"], "5");
    assert_eq!(report["schema_version"], 1);
}

#[test]
fn power_syntax_and_sieve() {
    let report = json(&["sieve", "--base", "2", "--x", "2^30", "--y", "29", "--h", "1", "--census"]);
    assert_eq!(report["params"]["upper_bound"], "44179");
    assert_eq!(report["params"]["prime_palindrome_count"], "3657");
    assert_eq!(report["params"]["satisfied"], true);
    assert_eq!(report["rows"].as_array().unwrap().len(), 22);
}

#[test]
fn decay_check_reports_corollary() {
    let report = json(&["verify", "decay", "--base", "2", "--mod", "5", "--x", "2^40,2^60,2^80"]);
    assert_eq!(report["params"]["corollary"], "cor46");
    for r in report["rows"].as_array().unwrap() {
        assert!(r["lhs_log"].is_number() && r["rhs_log"].is_number());
    }
}

#[test]
fn failures_use_distinct_exit_codes() {
    let (code, out, err) = palindist(&["verify", "prop41", "--base", "10", "--mod", "13"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("ord_p(g) >= 3*sqrt(p) fails"));
    assert_eq!(palindist(&["verify", "prop42", "--base", "2", "--mod", "5", "--lmin", "90"]).0, 2);
    assert_eq!(palindist(&["census", "--base", "2", "--x", "2^80"]).0, 3);
    assert_eq!(palindist(&["census", "--base", "10", "--x", "100", "--nope"]).0, 1);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = ["verify", "lemma21", "--base", "10", "--qmax", "60"];
    let (_, one, _) = palindist(&[&args[..], &["--threads", "1"]].concat());
    let (_, many, _) = palindist(&[&args[..], &["--threads", "8"]].concat());
    assert_eq!(one, many);
}
