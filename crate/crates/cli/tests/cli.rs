use std::process::{Command, Output};

fn ellq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellq"))
        .args(args)
        .env_remove("ELLQ_TRUNC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bracket_at_zero() {
    let o = ellq(&["eval", "bracket", "--u", "0", "--q", "0.5", "--r", "3"]);
    assert!(o.status.success());
    let v: Vec<f64> = stdout(&o)
        .trim()
        .trim_end_matches('i')
        .split(['+'])
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(v, [0.0, 0.0]);
}

#[test]
fn complex_literals() {
    for lit in ["1.3+0.137i", "-0.2-1e-3i", "0.5i", "-0.4"] {
        let o = ellq(&["eval", "bracket", "--u", lit]);
        assert!(
            o.status.success(),
            "{lit}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert_eq!(
        ellq(&["eval", "bracket", "--u", "1.3+i0.2"]).status.code(),
        Some(2)
    );
}

#[test]
fn ft_check_prints_both_sides() {
    let o = ellq(&["eval", "series", "--kind", "10V9", "--ft-check", "--s", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("series") && out.contains("product"));
    let res: f64 = out
        .lines()
        .find(|l| l.starts_with("residual"))
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(res < 1e-9);
}

#[test]
fn cg_example_matches_brute_force() {
    let o = ellq(&[
        "eval",
        "cg",
        "--l1",
        "2",
        "--l2",
        "2",
        "--s",
        "1",
        "--m",
        "1",
        "--k",
        "0",
        "--u",
        "0.4",
        "--P",
        "1.3+0.137i",
        "--brute",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let res: f64 = out
        .lines()
        .find(|l| l.starts_with("residual"))
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(res < 1e-8);
}

#[test]
fn exit_codes() {
    assert_eq!(ellq(&["suite", "nope"]).status.code(), Some(2));
    assert_eq!(ellq(&["suite"]).status.code(), Some(2));
    assert_eq!(
        ellq(&["eval", "bracket", "--u", "0.3", "--q", "1.5"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        ellq(&[
            "eval", "cg", "--l1", "1", "--l2", "1", "--s", "1", "--m", "5", "--k", "0", "--u",
            "0.4", "--P", "1.3"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        ellq(&[
            "suite",
            "theta",
            "--samples",
            "2",
            "--out",
            "/nonexistent/dir/report.json"
        ])
        .status
        .code(),
        Some(4)
    );
    assert_eq!(
        ellq(&["suite", "cg", "--tol", "1e-20", "--samples", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ellq(&["suite", "theta", "--samples", "3"]).status.code(),
        Some(0)
    );
}

#[test]
fn reports_are_deterministic() {
    let a = ellq(&["suite", "rll", "--samples", "5", "--seed", "1"]);
    let b = ellq(&["suite", "rll", "--samples", "5", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["schema"], "1");
    assert_eq!(json["config"]["seed"], 1);
    assert_eq!(json["config"]["r_rep"], 3.3);
    assert!(json.get("timing_s").is_none());
}

#[test]
fn timing_is_opt_in() {
    let o = ellq(&["suite", "theta", "--samples", "2", "--timing"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(json["timing_s"].is_array());
}

#[test]
fn csv_and_table_formats() {
    let o = ellq(&["suite", "theta,series", "--samples", "2", "--format", "csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("suite,name,residual,threshold,pass"));
    assert!(lines.clone().any(|l| l.starts_with("series,")));
    assert!(lines.all(|l| l.ends_with(",true")));
    let t = ellq(&["suite", "theta", "--samples", "2", "--format", "table"]);
    assert!(stdout(&t).starts_with("== theta PASS"));
}

#[test]
fn truncation_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ellq"))
        .args(["suite", "theta", "--samples", "2"])
        .env("ELLQ_TRUNC", "80")
        .output()
        .unwrap();
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["config"]["trunc"], 80);
}
