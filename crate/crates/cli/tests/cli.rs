use std::process::{Command, Output};

fn qtchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtchar"))
        .args(args)
        .env_remove("QCHAR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = qtchar(&["chi-q", "--type", "A", "--rank", "2", "--monomial", "Y[1,0]"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "Y[1,0]  1\nY[1,2]^-1Y[2,1]  1\nY[2,3]^-1  1\n");

    let o = qtchar(&["dim", "--type", "A", "--rank", "3", "--monomial", "Y[2,0]"]);
    assert_eq!(stdout(&o), "6\n");

    let o = qtchar(&["gamma", "--type", "A", "--rank", "1", "--i", "1", "--j", "1", "--u", "2"]);
    assert_eq!(stdout(&o).lines().next(), Some("2"));
    let o = qtchar(&["gamma", "--type", "A", "--rank", "1", "--i", "1", "--j", "1", "--u", "-1"]);
    assert_eq!(stdout(&o), "0\n0\n");
    let o = qtchar(&["gamma", "--type", "A", "--rank", "1", "--i", "1", "--j", "1", "--u", "1"]);
    assert_eq!(stdout(&o), "0\n1\n");
}

#[test]
fn json_schema() {
    let o = qtchar(&["chi-qt", "--type", "A", "--rank", "1", "--monomial", "Y[1,0]Y[1,2]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cartan"], serde_json::json!({"family": "A", "rank": 1}));
    assert_eq!(v["top"], "Y[1,0]Y[1,2]");
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    assert_eq!(v["terms"][0]["c"], serde_json::json!([[0, 1]]));

    let o = qtchar(&["fold", "--type", "D", "--rank", "4", "--monomial", "Y[1,0]", "--format", "json", "--verify-sigma"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["orbit"], true);
    assert_eq!(v["top"], "Yo[1,0]");
    assert_eq!(v["terms"].as_array().unwrap().len(), 8);
    assert_eq!(v["sigma_invariant"], true);
}

#[test]
fn exit_codes() {
    let o = qtchar(&["dim", "--type", "A", "--rank", "2", "--monomial", "Y[1,0]^-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotDominant"));

    let o = qtchar(&["fold", "--type", "C", "--rank", "3", "--monomial", "Y[1,0]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UnsupportedFolding"));

    let o = qtchar(&["chi-qt", "--type", "A", "--rank", "2", "--monomial", "Y[1,0]Y[2,1]", "--cap", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("CapExceeded"));

    for bad in [
        vec!["dim", "--type", "E", "--rank", "2", "--monomial", "Y[1,0]"],
        vec!["dim", "--type", "A", "--rank", "2", "--monomial", "Y[1,0]", "--cap", "0"],
        vec!["dim", "--type", "A", "--rank", "2", "--monomial", "Y[1,0]", "--nope"],
        vec!["frobnicate"],
    ] {
        assert_eq!(qtchar(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn freeze_and_fold() {
    let o = qtchar(&[
        "freeze", "--from-type", "B", "--from-rank", "3", "--to-rank", "2", "--monomial", "Y[1,0]Y[3,2]", "--object", "ft",
        "--verify",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("verified: true\n"));

    let signed = qtchar(&["fold", "--type", "A", "--rank", "3", "--monomial", "Y[0,0]"]);
    let standard = qtchar(&["fold", "--type", "A", "--rank", "3", "--monomial", "Y[2,0]", "--labeling", "standard"]);
    assert_eq!(stdout(&signed).lines().count(), 6);
    assert_eq!(stdout(&standard).replace("Yo[1,", "Yo[-1,").replace("Yo[2,", "Yo[0,").replace("Yo[3,", "Yo[1,"), stdout(&signed));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["chi-qt", "--type", "C", "--rank", "3", "--monomial", "Y[1,0]Y[3,3]", "--format", "json"];
    let one = qtchar(&[&args[..], &["--threads", "1"]].concat());
    let four = qtchar(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["chi-qt", "--type", "A", "--rank", "2", "--monomial", "Y[1,0]", "--format", "json", "--cache-dir", d];
    let first = qtchar(&args);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = qtchar(&args);
    assert_eq!(first.stdout, second.stdout);

    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "garbage").unwrap();
    let third = qtchar(&args);
    assert_eq!(third.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&third.stderr).contains("warning"));
    assert_ne!(std::fs::read_to_string(&entry).unwrap(), "garbage");
}

#[test]
fn selftest_filter() {
    let o = qtchar(&["selftest", "--filter", "gamma"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("PASS criterion 1"));
}
