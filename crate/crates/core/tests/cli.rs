use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_feasilab"));
    c.env_remove("FEASILAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("feasilab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn solve_disjoint_balls() {
    let a = fixture("a.json", r#"{"type":"ball","center":[0,0],"radius":1}"#);
    let b = fixture("b.json", r#"{"type":"ball","center":["4","0"],"radius":"1"}"#);
    let o = run(&["solve", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert!((v["distance"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["status"], "converged");
    assert!(v.get("trace").is_none());
}

#[test]
fn nonconvex_table() {
    let o = run(&["example", "nonconvex", "--n-range", "2..8", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "distance").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 7);
    for (i, r) in rows.iter().enumerate() {
        let n = (i + 2) as f64;
        let d: f64 = r.split(',').nth(col).unwrap().parse().unwrap();
        assert!((d - 1.0 / n).abs() < 1e-9, "row {r}");
    }
}

#[test]
fn gamma_check_passes_and_is_deterministic() {
    let args = ["check", "gamma17", "--trials", "5000", "--seed", "42", "--format", "csv"];
    let (x, y) = (run(&args), run(&args));
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
    assert!(String::from_utf8_lossy(&x.stdout).starts_with("index,observed,bound,pass\n"));
    let j = run(&["check", "gamma17", "--trials", "5000"]);
    let v = stdout_json(&j);
    assert_eq!(v["passed"], true);
    assert_eq!(v["bound"], "1.7000000000000000e1");
}

#[test]
fn seed_variable_changes_the_corpus() {
    let args = ["check", "gamma17", "--trials", "2000", "--format", "csv"];
    let default = run(&args).stdout;
    let explicit = run(&["check", "gamma17", "--trials", "2000", "--format", "csv", "--seed", "42"]).stdout;
    let other = bin().args(args).env("FEASILAB_SEED", "7").output().unwrap().stdout;
    assert_eq!(default, explicit);
    assert_ne!(default, other);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["solve", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["example", "nonconvex", "--n-range", "5..2"]).status.code(), Some(2));
    let bad = fixture("bad.json", r#"{"type":"box","lower":[0,0],"upper":[-1,1]}"#);
    let good = fixture("good.json", r#"{"type":"ball","center":[0,0],"radius":1}"#);
    let o = run(&["solve", "--a", bad.to_str().unwrap(), "--b", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["error"]["pointer"], "/upper");
}

#[test]
fn failed_check_exits_1_with_json() {
    let o = run(&["check", "thm-lur", "--cube"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["passed"], false);
}

#[test]
fn numerical_failure_exits_1() {
    // an empty intersection has no projection
    let a = fixture(
        "empty.json",
        r#"{"type":"intersection","members":[{"type":"ball","center":[0,0],"radius":1},{"type":"ball","center":[4,0],"radius":1}]}"#,
    );
    let b = fixture("nb.json", r#"{"type":"ball","center":[0,5],"radius":1}"#);
    let o = run(&["solve", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["error"]["kind"], "numerical");
    assert!(v["error"]["best"].is_array());
}

#[test]
fn truncated_hausdorff_of_disjoint_balls() {
    let a = fixture("ta.json", r#"{"type":"ball","center":[0,0],"radius":1}"#);
    let b = fixture("tb.json", r#"{"type":"ball","center":[4,0],"radius":1}"#);
    let o = run(&["metrics", "aw", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--N-grid", "1,4", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v = stdout_json(&o);
    let lower = |i: usize| v[i]["lower"].as_str().unwrap().parse::<f64>().unwrap();
    assert!((lower(0) - 4.0).abs() < 1e-9 && (lower(1) - 4.0).abs() < 1e-9);
}

#[test]
fn metrics_and_analyses() {
    let a = fixture("ma.json", r#"{"type":"box","lower":[0,0],"upper":[1,1]}"#);
    let b = fixture("mb.json", r#"{"type":"box","lower":[0,0],"upper":[2,1]}"#);
    let (sa, sb) = (a.to_str().unwrap(), b.to_str().unwrap());
    let o = run(&["metrics", "hausdorff", "--a", sa, "--b", sb]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,N,lower,upper"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!((row[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);

    let m = fixture("cone.json", r#"{"type":"motzkin","points":[[0,0]],"rays":[[1,0],[1,1]]}"#);
    let o = run(&["analyze", "recession", "--a", m.to_str().unwrap()]);
    let v = stdout_json(&o);
    assert_eq!(v["bounded"], false);

    let o = run(&["analyze", "bounded-min", "--a", sa, "--b", sb]);
    assert_eq!(stdout_json(&o)["minimal_set_bounded"], true);

    let ball = fixture("ball.json", r#"{"type":"ball","center":[0,0],"radius":1}"#);
    let o = run(&["analyze", "slice", "--a", ball.to_str().unwrap(), "--f", "1,0", "--alpha", "0.02", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let upper: f64 = text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((upper - 2.0 * (0.04f64 - 0.0004).sqrt()).abs() < 1e-3);
}

#[test]
fn help_exits_0() {
    let o = run(&["--help"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("check"));
}
