//! End-to-end runs of the `taut` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn taut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taut"))
        .args(args)
        .env_remove("TAUT_CACHE")
        .output()
        .expect("run taut")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("taut-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_file(&p);
    p
}

#[test]
fn euler_characteristics() {
    let o = taut(&["chi", "1", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "-1/12\n");
    assert_eq!(stdout(&taut(&["chi", "0", "3"])), "1\n");
    assert_eq!(stdout(&taut(&["chi", "2", "0", "--route", "omega"])), "-1/240\n");
}

#[test]
fn hodge_routes_agree() {
    assert_eq!(stdout(&taut(&["hodge", "1", "1", "1"])), "1/24\n");
    let a = taut(&["hodge", "2", "1", "2", "--psi", "2"]);
    let b = taut(&["hodge", "2", "1", "2", "--psi", "2", "--graph"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn usage_errors_exit_2() {
    let o = taut(&["chi", "0", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not stable"));

    let o = taut(&["omega", "1", "1", "--r", "2", "--s", "1", "--a", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("≢"), "{}", stderr(&o));

    let o = taut(&["chi", "4", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds"));

    assert_eq!(taut(&["chi", "one", "1"]).status.code(), Some(2));
    assert_eq!(taut(&["omega", "1", "1", "--r", "2", "--s", "1", "--a", "1", "--x", "1/0"]).status.code(), Some(2));
    assert_eq!(taut(&["--threads", "0", "chi", "1", "1"]).status.code(), Some(2));
}

#[test]
fn csv_and_json() {
    let o = taut(&["--format", "csv", "chi", "1", "2"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("g,n,value,route"));
    assert_eq!(lines.count(), 3);

    let o = taut(&["--format", "json", "mv", "1", "1"]);
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["value"], "1/12");
    }
}

#[test]
fn verify_emits_json_lines() {
    let o = taut(&["verify", "--grid", "tiny"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().count() > 10);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
    }
}

#[test]
fn cache_does_not_change_output() {
    let path = tmp("cache.txt");
    let p = path.to_str().unwrap();
    let plain = stdout(&taut(&["table", "--dimmax", "3"]));
    let cold = stdout(&taut(&["--cache", p, "table", "--dimmax", "3"]));
    assert!(path.exists());
    let warm = stdout(&taut(&["--cache", p, "table", "--dimmax", "3"]));
    let off = stdout(&taut(&["--cache", p, "--no-cache", "table", "--dimmax", "3"]));
    assert_eq!(plain, cold);
    assert_eq!(plain, warm);
    assert_eq!(plain, off);

    // a wrong-degree line and garbage are skipped, not trusted
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("1;5;7/3\nnot a line\n");
    std::fs::write(&path, text).unwrap();
    let o = taut(&["--cache", p, "table", "--dimmax", "3"]);
    assert_eq!(stdout(&o), plain);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn decimal_rendering_warns() {
    let o = taut(&["--decimal", "5", "chi", "1", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("-1/12 ~ -0.0833"));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn table_is_deterministic() {
    let a = taut(&["--threads", "1", "table", "--dimmax", "3"]);
    let b = taut(&["--threads", "4", "table", "--dimmax", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
