use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bandit-lab"));
    c.env_remove("BANDIT_LAB_OUT");
    c
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(format!("{name}.json"));
    fs::write(&p, body).unwrap();
    p
}

const SMALL: &str = r#"{"name":"small","N":10,"K":3,"gamma":5,"T":20,"replications":4,
    "reward_model":{"kind":"stationary"}}"#;

fn run(config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .args(["run", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn run_is_reproducible_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small", SMALL);
    let a = run(&cfg, &dir.path().join("a"), &["--seed", "42"]);
    let b = run(&cfg, &dir.path().join("b"), &["--seed", "42"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(
        fs::read(dir.path().join("a/small.csv")).unwrap(),
        fs::read(dir.path().join("b/small.csv")).unwrap()
    );
    assert!(dir.path().join("a/small.summary.csv").exists());
    assert!(dir.path().join("a/small.summary.txt").exists());
    assert_eq!(a.stdout, b.stdout);

    assert!(run(&cfg, &dir.path().join("c"), &["--seed", "43"])
        .status
        .success());
    assert_ne!(
        fs::read(dir.path().join("a/small.csv")).unwrap(),
        fs::read(dir.path().join("c/small.csv")).unwrap()
    );
}

#[test]
fn reps_override_and_env_default_for_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small", SMALL);
    let env_out = dir.path().join("from_env");
    let o = bin()
        .args(["run", "--reps", "2", "--config"])
        .arg(&cfg)
        .env("BANDIT_LAB_OUT", &env_out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(env_out.join("small.csv")).unwrap();
    // 3 default strategies x 2 reps x 20 epochs + header
    assert_eq!(csv.lines().count(), 3 * 2 * 20 + 1);
}

#[test]
fn missing_config_exits_2_naming_path() {
    let o = bin()
        .args([
            "run",
            "--config",
            "/nonexistent/stationary.json",
            "--out",
            "/tmp/unused",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/stationary.json"));
    assert!(o.stdout.is_empty());
}

#[test]
fn invalid_config_exits_2_naming_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad", r#"{"N": 1}"#);
    let o = run(&cfg, &dir.path().join("o"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`N`"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small", SMALL);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run(&cfg, &blocker.join("sub"), &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn summarize_matches_run_and_ignores_row_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small", SMALL);
    let out = dir.path().join("o");
    let r = run(&cfg, &out, &[]);
    assert!(r.status.success());
    let csv_path = out.join("small.csv");
    let s = bin()
        .args(["summarize", "--input"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(s.status.success());
    assert_eq!(s.stdout, r.stdout);

    // reverse the data rows
    let text = fs::read_to_string(&csv_path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let head = lines.remove(0);
    lines.reverse();
    let shuffled = dir.path().join("shuffled.csv");
    fs::write(&shuffled, format!("{head}\n{}\n", lines.join("\n"))).unwrap();
    let s2 = bin()
        .args(["summarize", "--input"])
        .arg(&shuffled)
        .output()
        .unwrap();
    assert_eq!(s2.stdout, r.stdout);
}

#[test]
fn summarize_rejects_missing_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small", SMALL);
    let out = dir.path().join("o");
    assert!(run(&cfg, &out, &[]).status.success());
    let text = fs::read_to_string(out.join("small.csv")).unwrap();
    let cut: String = text
        .lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(6);
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, cut).unwrap();
    let o = bin()
        .args(["summarize", "--input"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("realized_reward"));
}

#[test]
fn list_strategies_shows_defaults() {
    let o = bin().arg("list-strategies").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for kind in ["epsilon-greedy", "ag1", "ucb1", "thompson"] {
        assert!(
            text.lines().any(|l| l.trim_start().starts_with(kind)),
            "{kind}"
        );
    }
    assert!(text.contains("epsilon=0.1"));
    assert!(text.contains("window_r=3"));
    assert!(text.contains("restart_period"));
}

#[test]
fn bad_usage_exits_2() {
    assert_eq!(bin().output().unwrap().status.code(), Some(2));
    assert_eq!(bin().arg("plot").output().unwrap().status.code(), Some(2));
}
