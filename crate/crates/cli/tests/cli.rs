use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn eapprox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eapprox"))
        .args(args)
        .env_remove("EOP_DEFAULT_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn has_row(rows: &[Vec<String>], want: [&str; 3]) -> bool {
    rows.iter()
        .any(|r| r.len() == 3 && r[0] == want[0] && r[1] == want[1] && r[2] == want[2])
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn estimate(v: &Value, key: &str) -> f64 {
    v["estimates"][key]
        .as_str()
        .expect("string estimate")
        .parse()
        .unwrap()
}

#[test]
fn gamma_approx_closed_rows() {
    let o = eapprox(&[
        "gamma-approx",
        "--alpha",
        "1/2",
        "--n",
        "3",
        "--method",
        "closed",
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["n", "numerator", "denominator"]);
    assert_eq!(
        &rows[1..],
        &[["0", "2", "1"], ["1", "7", "3"], ["2", "137", "60"]]
    );
}

#[test]
fn gamma_approx_domain_exit_code() {
    let o = eapprox(&["gamma-approx", "--alpha", "3/2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha < 1"));
    let o = eapprox(&["gamma-approx", "--alpha", "-2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&eapprox(&["gamma-approx", "--alpha", "0.5"])), 1);
    assert_eq!(code(&eapprox(&["no-such-command"])), 1);
    assert_eq!(code(&eapprox(&["e-convergents"])), 1);
    assert_eq!(code(&eapprox(&["--help"])), 0);
}

#[test]
fn gamma_approx_json_limit() {
    let o = eapprox(&[
        "gamma-approx",
        "--alpha",
        "1/2",
        "--n",
        "300",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["command"], "gamma-approx");
    assert_eq!(v["values"].as_array().unwrap().len(), 300);
    let limit = estimate(&v, "limit_estimate");
    assert!((limit - 1.7724538509055159).abs() < 1e-3, "limit {limit}");
    assert_eq!(v["manifest"]["precision_bits"], 256);
}

#[test]
fn gamma_approx_csv_footer() {
    let o = eapprox(&[
        "gamma-approx",
        "--alpha",
        "1/3",
        "--n",
        "40",
        "--digits",
        "12",
    ]);
    let rows = csv_rows(&o);
    let footer = rows.last().unwrap();
    assert_eq!(footer[0], "limit_estimate");
    let mantissa = footer[1].split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 12);
    assert!(footer[2].parse::<f64>().unwrap().is_finite());
}

#[test]
fn euler_approx_rows_and_agreement() {
    let o = eapprox(&[
        "euler-approx",
        "--n",
        "4",
        "--method",
        "all",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["estimates"]["exact_agreement"], "true");
    let rows: Vec<[String; 3]> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| ["n", "numerator", "denominator"].map(|k| r[k].as_str().unwrap().to_owned()))
        .collect();
    assert_eq!(rows[0], ["0", "0", "1"]);
    assert_eq!(rows[1], ["1", "0", "1"]);
    assert_eq!(rows[2], ["2", "1", "4"]);
    assert_eq!(rows[3], ["3", "17", "36"]);
}

#[test]
fn euler_approx_json_limit() {
    let o = eapprox(&["euler-approx", "--n", "2000", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let limit = estimate(&json(&o), "limit_estimate");
    assert!((limit - 0.5772156649015329).abs() < 1e-3, "limit {limit}");
}

#[test]
fn e_convergents_rows() {
    let o = eapprox(&["e-convergents", "--n", "3"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    for want in [["1", "3", "1"], ["2", "19", "7"], ["3", "193", "71"]] {
        assert!(has_row(&rows, want), "missing {want:?}");
    }
}

#[test]
fn intseq_row() {
    let o = eapprox(&["intseq", "--k", "5", "--prec", "128"]);
    assert_eq!(code(&o), 0);
    assert!(has_row(&csv_rows(&o), ["5", "43", "30"]));
}

#[test]
fn asym_check_elog_passes() {
    let o = eapprox(&[
        "asym-check",
        "--which",
        "elog",
        "--z",
        "30",
        "--prec",
        "512",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["estimates"]["pass"], "true");
    assert!(estimate(&v, "rel_error") <= 1e-15);
    assert_eq!(v["estimates"]["truncation"], "30");
}

#[test]
fn asym_check_failure_exits_three() {
    // at z = 5 the optimally truncated series is only good to about e^-5
    let o = eapprox(&[
        "asym-check",
        "--which",
        "ealpha",
        "--alpha",
        "1/2",
        "--z",
        "5,30",
    ]);
    assert_eq!(code(&o), 3);
    let rows = csv_rows(&o);
    assert_eq!(rows[1].last().unwrap(), "false");
    assert_eq!(rows[2].last().unwrap(), "true");
}

#[test]
fn gamma_deriv_table() {
    let o = eapprox(&["gamma-deriv", "--s", "1", "--order", "2", "--digits", "15"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["n", "value"]);
    let d1: f64 = rows[2][1].parse().unwrap();
    assert!((d1 + 0.5772156649015329).abs() < 1e-14);
    assert_eq!(code(&eapprox(&["gamma-deriv", "--s", "0"])), 2);
}

#[test]
fn pade_order_condition() {
    let o = eapprox(&["pade", "--n", "4", "--z", "-1/3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["estimates"]["order_condition"], "true");
}

#[test]
fn fit_reads_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("gamma.csv");
    let o = eapprox(&[
        "gamma-approx",
        "--alpha",
        "1/2",
        "--n",
        "200",
        "--output",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = eapprox(&[
        "fit",
        "--input",
        table.to_str().unwrap(),
        "--against-limit",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let limit = estimate(&v, "limit_estimate");
    // 200 terms of an O(n^-1/2) sequence: a few digits at best
    assert!((limit - 1.7724538509055159).abs() < 5e-3);
    assert_eq!(v["estimates"]["points"], "200");
    assert!(v["estimates"]["q"].is_string());
}

#[test]
fn fit_plain_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("values.txt");
    let text: String = (1..=60)
        .map(|n| format!("{}\n", 2f64.powi(n) / n as f64))
        .collect();
    std::fs::write(&input, text).unwrap();
    let o = eapprox(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!((estimate(&v, "q") - 2.0).abs() < 1e-3);
    assert!(estimate(&v, "u").abs() < 0.05);
}

fn write_and_replay(args: &[&str], dir: &Path) {
    let out = dir.join("run.out");
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--output", out.to_str().unwrap()]);
    let o = eapprox(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = dir.join("run.out.manifest.json");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    let sha = m["outputs"][0]["sha256"].as_str().unwrap().to_owned();
    assert_eq!(sha.len(), 64);

    let o = eapprox(&["replay", manifest.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains(&sha));
}

#[test]
fn manifest_replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write_and_replay(
        &[
            "gamma-approx",
            "--alpha",
            "-1/2",
            "--n",
            "50",
            "--method",
            "all",
        ],
        dir.path(),
    );
    write_and_replay(
        &["--format", "json", "intseq", "--k", "12", "--prec", "200"],
        dir.path(),
    );
    write_and_replay(
        &[
            "gamma-deriv",
            "--s",
            "1/3",
            "--order",
            "3",
            "--digits",
            "30",
        ],
        dir.path(),
    );
}

#[test]
fn replay_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let manifest = dir.path().join("m.json");
    let o = eapprox(&[
        "e-convergents",
        "--n",
        "5",
        "--output",
        out.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&manifest).unwrap();
    let tampered = text.replace("\"n\": \"5\"", "\"n\": \"6\"");
    assert_ne!(text, tampered);
    std::fs::write(&manifest, tampered).unwrap();
    assert_eq!(code(&eapprox(&["replay", manifest.to_str().unwrap()])), 3);
}

#[test]
fn env_sets_default_precision() {
    let o = Command::new(env!("CARGO_BIN_EXE_eapprox"))
        .args([
            "gamma-deriv",
            "--s",
            "1/2",
            "--order",
            "0",
            "--format",
            "json",
        ])
        .env("EOP_DEFAULT_PREC", "96")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["manifest"]["precision_bits"], 96);
}
