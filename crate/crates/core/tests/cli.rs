use std::process::{Command, Output};

fn bncurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bncurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn curve_json_counts_are_strings() {
    let o = bncurve(&["curve", "--a", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for field in [r#""nu": "10""#, r#""delta": "10""#, r#""genus": "11""#] {
        assert!(text.contains(field), "{field} missing");
    }
}

#[test]
fn castelnuovo_prints_two() {
    let o = bncurve(&["castelnuovo", "--a", "2", "--r", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn gonality5_report() {
    let o = bncurve(&["gonality5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("gonality = 6"));
    let j = bncurve(&["gonality5", "--degree", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["degree"], 3);
    assert!(v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["verdict"] == "pass"));
}

#[test]
fn selftest_exit_codes() {
    assert_eq!(
        bncurve(&["selftest", "--max-a", "4"]).status.code(),
        Some(0)
    );
    let corrupted = bncurve(&["selftest", "--max-a", "4", "--corrupt-catalan5"]);
    assert_eq!(corrupted.status.code(), Some(2));
    assert!(stdout(&corrupted).contains("[FAIL]"));
}

#[test]
fn invalid_input_exits_one_with_usage() {
    for args in [
        &["nonsense"][..],
        &["curve", "--a", "9"],
        &["census", "--g", "5"],
        &["tables", "--g", "4", "--d", "3"],
    ] {
        let o = bncurve(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(
            String::from_utf8_lossy(&o.stderr).contains("Usage"),
            "{args:?}"
        );
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("bncurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tables.csv");
    let o = bncurve(&[
        "tables",
        "--g",
        "5",
        "--d",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("component,"));
    assert_eq!(csv.lines().count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let a = bncurve(&["curve", "--a", "3", "--format", "dot"]);
    let b = bncurve(&["curve", "--a", "3", "--format", "dot"]);
    assert_eq!(a.stdout, b.stdout);
}
