//! End-to-end tests of the `expsum` binary: fixtures, exit codes, report
//! formats, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_expsum"))
}

fn write_fixture(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("expsum-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("write fixture");
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const XSQ: &str = r#"{"n_vars": 1, "terms": [{"coef": 1, "exps": [2]}]}"#;
const I3: &str = r#"{"n": 3, "matrix": [[1,0,0],[0,1,0],[0,0,1]]}"#;
const CONE: &str = r#"{"n": 3, "matrix": [[1,0,0],[0,1,0],[0,0,-1]]}"#;

#[test]
fn eval_sum_both_methods_agree() {
    let f = write_fixture("xsq.json", XSQ);
    let out = bin()
        .args(["eval-sum", "--f"])
        .arg(&f)
        .args(["--p", "3", "--m", "2", "--method", "both"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"equal\": true"), "{text}");
    assert!(text.contains("\"3\""), "{text}");
    assert!(text.contains("embedding_re"), "{text}");
}

#[test]
fn eval_sum_restricted_coset() {
    let f = write_fixture("xsq2.json", XSQ);
    let out = bin()
        .args(["eval-sum", "--f"])
        .arg(&f)
        .args(["--p", "3", "--m", "2", "--alpha", "1", "--method", "brute"])
        .output()
        .unwrap();
    assert!(out.status.success());
    // S_1(x², 9) = 0
    let text = stdout(&out);
    assert!(text.contains("\"0\""), "{text}");
}

#[test]
fn malformed_file_exits_2() {
    let f = write_fixture("bad.json", "{ not json");
    let out = bin()
        .args(["eval-sum", "--f"])
        .arg(&f)
        .args(["--p", "3", "--m", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
}

#[test]
fn exhausted_budget_exits_3() {
    let f = write_fixture("xsq3.json", XSQ);
    let out = bin()
        .args(["eval-sum", "--f"])
        .arg(&f)
        .args(["--p", "3", "--m", "2", "--budget", "2", "--method", "brute"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn env_var_sets_budget() {
    let f = write_fixture("xsq4.json", XSQ);
    let out = bin()
        .args(["eval-sum", "--f"])
        .arg(&f)
        .args(["--p", "3", "--m", "2", "--method", "brute"])
        .env("EXPSUM_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_suite_exits_2() {
    let out = bin().args(["verify", "--suite", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_gauss_small() {
    let out = bin()
        .args(["verify", "--suite", "gauss", "--qmax", "59", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("PASS gauss"));
}

#[test]
fn census_reports_density_and_scaling() {
    let form = write_fixture("i3.json", I3);
    let out = bin()
        .args(["census", "--form"])
        .arg(&form)
        .args(["--p", "3", "--m", "2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"count_A\": 72"), "{text}");
    assert!(text.contains("8/9"), "{text}");
    assert!(text.contains("\"hensel_scaling_ok\": true"), "{text}");
}

#[test]
fn sweep_structured_report_is_deterministic() {
    let form = write_fixture("i3-sweep.json", I3);
    let run = || {
        let out = bin()
            .args(["thm2-sweep", "--form"])
            .arg(&form)
            .args(["--p", "3", "--m", "2,3", "--eps", "0.05"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
    };
    let first = run();
    let second = run();
    assert_eq!(
        first, second,
        "structured sweep output must be byte-identical"
    );
    assert!(first.contains("\"trend_non_increasing\""));
}

#[test]
fn sweep_csv_has_fixed_columns() {
    let form = write_fixture("i3-csv.json", I3);
    let out = bin()
        .args(["thm2-sweep", "--form"])
        .arg(&form)
        .args(["--p", "3", "--m", "2", "--eps", "0.05", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.starts_with("p,m,epsilon,N,T,T0,ratio,deviation,runtime_ms\n"),
        "{text}"
    );
}

#[test]
fn growth_counts_cone_zeros() {
    let form = write_fixture("cone.json", CONE);
    let out = bin()
        .args(["growth", "--form"])
        .arg(&form)
        .args(["--N", "5"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"count\": 57"), "{text}");
}
