use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transverify"))
        .args(args)
        .env_remove("TRANSVERIFY_DEFAULT_QORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn delta1_markdown_table() {
    let o = run(&["expand", "modform", "delta1", "--q-order", "8", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("| ") && !l.contains("q_exponent")).collect();
    assert_eq!(rows[0], "| 0 | 1/4 |");
    assert_eq!(rows[1], "| 1 | 6 |");
}

#[test]
fn theta_json_dump() {
    let o = run(&["expand", "theta", "theta2", "--y-order", "4", "--q-order", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = &v.as_array().unwrap()[0];
    assert_eq!(first["y_degree"], 0);
    assert_eq!(first["trunc_num"], 32);
}

#[test]
fn phi_in_dimension_three() {
    let o = run(&["expand", "phi", "Phi_W", "--k", "1", "--q-order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 3);
    assert!(v["element"].is_array());
}

#[test]
fn cs_csv_has_header() {
    let o = run(&["expand", "cs", "CSPhi_L[xi]", "--k", "1", "--q-order", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("monomial,q_exponent,coefficient"));
}

#[test]
fn jacobi_at_order_twenty_passes() {
    let o = run(&["verify", "jacobi", "--q-order", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"][0]["orders"]["q_order"], 20);
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains(",fail,"));
}

#[test]
fn cancellation_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["verify", "cancel-TM-11", "--q-order", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["cancellation"]["residual_zero"], true);
    assert_eq!(v["cancellation"]["case"], "TM-11");
}

#[test]
fn derive_reports_displays() {
    let o = run(&["derive", "cancel-XI-11"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["residual_zero"], true);
    assert_eq!(v["constants_equal"], true);
    assert!(v["matched_display"].as_str().unwrap().contains("z0 matches"));
    for key in ["z0", "z1", "lhs_const", "rhs_const"] {
        assert!(v[key].is_array(), "{key}");
    }
}

#[test]
fn derive_tilde_case() {
    let o = run(&["derive", "cancel-TILDE-9", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("## TILDE-9 at q-order 4"));
}

#[test]
fn insufficient_order_is_usage_error() {
    let o = run(&["derive", "cancel-TM-11", "--q-order", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("insufficient order"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "no-such-suite"][..],
        &["expand", "theta", "theta9"],
        &["expand", "modform", "delta4"],
        &["verify", "s-laws", "--tau", "0.1i"],
        &["verify", "jacobi", "--format", "yaml"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["verify", "s-laws"]);
    let b = run(&["verify", "s-laws"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["derive", "cancel-TM-11", "--q-order", "2"]);
    let b = run(&["derive", "cancel-TM-11", "--q-order", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn env_sets_default_order() {
    let o = Command::new(env!("CARGO_BIN_EXE_transverify"))
        .args(["verify", "jacobi"])
        .env("TRANSVERIFY_DEFAULT_QORDER", "3")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0]["orders"]["q_order"], 3);
    let o = Command::new(env!("CARGO_BIN_EXE_transverify"))
        .args(["verify", "jacobi", "--q-order", "5"])
        .env("TRANSVERIFY_DEFAULT_QORDER", "3")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0]["orders"]["q_order"], 5);
}
