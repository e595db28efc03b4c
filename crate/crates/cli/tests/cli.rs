use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_active-time"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_rejects_crossing_windows() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "x.txt", "g 1\njob a 0 3 2\njob b 1 4 1\n");
    let out = run(&["validate", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cross"));
}

#[test]
fn validate_prints_tree() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "n.txt",
        "g 2\njob a 0 4 2\njob b 0 2 1\njob c 2 4 1\n",
    );
    let out = run(&["validate", &file]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("node 0 [0, 4) L=0"));
}

#[test]
fn solve_prints_valid_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "n.txt",
        "g 2\njob a 0 4 2\njob b 0 2 1\njob c 2 4 1\n",
    );
    let out = run(&["solve", &file]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lp\t2/1"));
    assert!(text.contains("open\t2"));
    assert_eq!(text.lines().filter(|l| l.starts_with("slot ")).count(), 2);
}

#[test]
fn oracle_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "u.txt", "g 1\njob a 2 5 1\n");
    let out = run(&["oracle", &file]);
    assert_eq!(stdout(&out), "opt\t1\nwitness\t2\n");
}

#[test]
fn gap_six() {
    let out = run(&["gap", "--g", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# opt\t9"));
    let lp = text.lines().find_map(|l| l.strip_prefix("# lp\t")).unwrap();
    let (num, den) = lp.split_once('/').unwrap();
    let (num, den): (u64, u64) = (num.parse().unwrap(), den.parse().unwrap());
    assert!(num <= 8 * den);
    assert!(text.contains("# bound\t9/8"));
}

#[test]
fn check_config_verdicts() {
    let out = run(&["check-config", "--e", "1,1", "--l", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "infeasible\n");
    let out = run(&["check-config", "--e", "2,1", "--l", "2,1"]);
    assert!(stdout(&out).starts_with("feasible\n"));
    let out = run(&["check-config", "--e", "1,2", "--l", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_chain() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "sc.txt", "d 2\nk 1\nset 1\nset 1 2\n");
    let out = run(&["reduce", "setcover", &sc]);
    assert_eq!(stdout(&out), "d 2\nk 1\nv 4 2\nu 4 1\nu 4 2\n");
    let psc = write(dir.path(), "psc.txt", &stdout(&out));
    let out = run(&["reduce", "psc", &psc]);
    assert!(out.status.success());
    let inst = write(dir.path(), "inst.txt", &stdout(&out));
    assert!(run(&["validate", &inst]).status.success());
    assert!(stdout(&out).contains("# threshold 7"));
}

#[test]
fn report_rows_are_sorted() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.txt", "g 1\njob a 0 3 2\n");
    write(
        dir.path(),
        "a.txt",
        "g 2\njob a 0 4 2\njob b 0 2 1\njob c 2 4 1\n",
    );
    let out = run(&["report", &dir.path().to_string_lossy()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("file\t"));
    assert_eq!(rows[1], "a.txt\t3\t4\t2\t2/1\t2\t1/1\t2\t1/1\tok");
    assert!(rows[2].starts_with("b.txt\t1\t3\t1\t2/1\t2\t"));
}

#[test]
fn report_flags_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.txt", "g 1\njob a 0 3 2\njob b 1 4 1\n");
    let out = run(&["report", &dir.path().to_string_lossy()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("bad.txt\t-"));
}
