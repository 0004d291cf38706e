use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn config(&self, name: &str, coefficients: &str, initial: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        let text = format!(r#"{{"coefficients": {coefficients}, "initial": {initial}}}"#);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn unit(&self) -> PathBuf {
        self.config(
            "unit.json",
            r#"{"kind": "constant", "a": "1", "b": "1", "c": "1", "d": "1"}"#,
            r#"{"x_prev": "1", "x0": "1", "y_prev": "1", "y0": "1"}"#,
        )
    }
}

fn run(config: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radex"))
        .args(args)
        .arg("--config")
        .arg(config)
        .env_remove("RADEX_FORMAT")
        .output()
        .unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn simulate_unit_config() {
    let ws = Workspace::new();
    let out = run(&ws.unit(), &["simulate", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "n,x,y\n-1,1,1\n0,1,1\n1,1/2,1/2\n2,2/3,2/3\n3,3/8,3/8\n"
    );

    let out = run(&ws.unit(), &["simulate", "--steps", "0"]);
    assert_eq!(stdout(&out), "n,x,y\n-1,1,1\n0,1,1\n");
}

#[test]
fn simulate_forbidden_config() {
    let ws = Workspace::new();
    let config = ws.config(
        "bad.json",
        r#"{"kind": "constant", "a": "1", "b": "1", "c": "1", "d": "1"}"#,
        r#"{"x_prev": "1", "x0": "1", "y_prev": "-1", "y0": "1"}"#,
    );
    let out = run(&config, &["simulate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stdout(&out).ends_with("singular-at,0,first-equation\n"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn json_output_and_format_precedence() {
    let ws = Workspace::new();
    let out = run(
        &ws.unit(),
        &["simulate", "--steps", "1", "--format", "json"],
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"][2]["x"], "1/2");
    assert_eq!(doc["status"]["kind"], "completed");

    let out = Command::new(env!("CARGO_BIN_EXE_radex"))
        .args(["simulate", "--steps", "1", "--config"])
        .arg(ws.unit())
        .env("RADEX_FORMAT", "json")
        .output()
        .unwrap();
    assert!(stdout(&out).starts_with('{'));
}

#[test]
fn closed_form_auto_picks_unit_family() {
    let ws = Workspace::new();
    let out = run(&ws.unit(), &["closed-form", "--indices", "0..6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("family: unit"));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 8);
    let simulated = stdout(&run(&ws.unit(), &["simulate", "--steps", "6"]));
    assert!(simulated.ends_with(text.trim_start_matches("n,x,y\n")));
}

#[test]
fn closed_form_rejects_inapplicable_family() {
    let ws = Workspace::new();
    let config = ws.config(
        "two.json",
        r#"{"kind": "constant", "a": "2", "b": "1", "c": "2", "d": "1"}"#,
        r#"{"x_prev": "1", "x0": "1", "y_prev": "1", "y0": "1"}"#,
    );
    assert_eq!(
        run(&config, &["closed-form", "--family", "neg-unit"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&config, &["closed-form", "--family", "nonunit"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn compare_reports_zero_mismatches_and_catches_the_fixture() {
    let ws = Workspace::new();
    let config = ws.config(
        "p.json",
        r#"{"kind": "periodic", "a": ["2", "-3"], "b": ["1", "5/2"], "c": "-1", "d": ["4", "7"]}"#,
        r#"{"x_prev": "1/2", "x0": "-3", "y_prev": "5", "y0": "2/9"}"#,
    );
    let out = run(&config, &["compare", "--steps", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 mismatches"));

    let out = run(&config, &["compare", "--steps", "20", "--corrupt-fixture"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 mismatches"));
}

#[test]
fn verify_symmetry_generators() {
    let ws = Workspace::new();
    let config = ws.unit();
    let out = run(&config, &["verify-symmetry", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("x2,verdict,,,,,PASS"));

    let out = run(
        &config,
        &[
            "verify-symmetry",
            "--generator",
            "x1-paper",
            "--samples",
            "5",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(
        text.contains("x1-paper,determining,0,0,2,2,nonzero"),
        "{text}"
    );
    assert!(text.contains("x1-paper,note,"));

    let out = run(
        &config,
        &[
            "verify-symmetry",
            "--generator",
            "custom",
            "--c0",
            "1",
            "--c1",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn forbidden_reports_the_analytic_condition() {
    let ws = Workspace::new();
    let config = ws.config(
        "bad.json",
        r#"{"kind": "constant", "a": "1", "b": "1", "c": "1", "d": "1"}"#,
        r#"{"x_prev": "1", "x0": "1", "y_prev": "-1", "y0": "1"}"#,
    );
    let out = run(&config, &["forbidden"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        stdout(&out),
        "step,factor,condition,family\n0,first-equation,j·b·x0·y_prev = -1 at j = 1,unit\n"
    );

    let config = ws.config(
        "neg.json",
        r#"{"kind": "constant", "a": "-1", "b": "2", "c": "-1", "d": "3"}"#,
        r#"{"x_prev": "1/3", "x0": "1", "y_prev": "1", "y0": "1"}"#,
    );
    let out = run(&config, &["forbidden"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("d·x_prev·y0 = 1"));

    let config = ws.config(
        "safe.json",
        r#"{"kind": "constant", "a": "1", "b": "1", "c": "1", "d": "1"}"#,
        r#"{"x_prev": "1", "x0": "1", "y_prev": "1", "y0": "1"}"#,
    );
    let out = run(&config, &["forbidden", "--horizon", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\nnone,"));
}

#[test]
fn reduce_columns_agree() {
    let ws = Workspace::new();
    let out = run(&ws.unit(), &["reduce", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,U_traj,U_rec,U_cf,V_traj,V_rec,V_cf"));
    for (n, line) in lines.enumerate() {
        let u = n + 1;
        assert_eq!(line, format!("{n},{u},{u},{u},{u},{u},{u}"));
    }
}

#[test]
fn usage_errors_exit_one() {
    let ws = Workspace::new();
    let config = ws.config("broken.json", r#"{"kind": "constant"}"#, "{}");
    let out = run(&config, &["simulate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid configuration"));

    let out = Command::new(env!("CARGO_BIN_EXE_radex"))
        .arg("simulate")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_radex"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
