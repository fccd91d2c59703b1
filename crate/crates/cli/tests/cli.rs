use std::process::{Command, Output};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tightgames"))
        .args(args)
        .args(["--fixtures", FIXTURES])
        .output()
        .expect("binary runs")
}

fn temp(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("tightgames-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn tight_reports_every_method() {
    let out = run(&["tight", "g3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches(": tight").count(), 4);
}

#[test]
fn witness_round_trips_through_verify() {
    let out = run(&["tight", "g7", "--method", "j", "--witness", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cert = temp("g7.json", &v["certificate"].to_string());
    assert_eq!(run(&["verify", &cert]).status.code(), Some(0));

    let mut bad = v["certificate"].clone();
    bad["psi"][0] = serde_json::Value::from(0);
    bad["psi"][1] = serde_json::Value::from(0);
    let bad = temp("g7-bad.json", &bad.to_string());
    assert_eq!(run(&["verify", &bad]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["tight", "no-such-form"]).status.code(), Some(2));
    let bad = temp("bad.txt", "2 2 3\n0 1\n1 0\n");
    assert_eq!(run(&["tight", &bad]).status.code(), Some(2));
    let rewards = temp("r.txt", "1 3/0\n0 0\n");
    assert_eq!(run(&["solve", "g7", "--rewards", &rewards]).status.code(), Some(2));
}

#[test]
fn zero_sum_solve_on_g7_has_no_saddle() {
    let rewards = temp("r7.txt", "1 0\n0 1\n");
    let out = run(&["solve", "g7", "--rewards", &rewards, "--mode", "zerosum"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("saddle none"));
}

#[test]
fn bisp_search_is_clean() {
    let out = run(&["bisp", "search", "--max-v", "3", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
}
