use std::fs;
use std::path::Path;

use assert_cmd::Command;
use tempfile::TempDir;

fn segre() -> Command {
    Command::cargo_bin("segre").unwrap()
}

fn count(path: &Path) -> u64 {
    let bytes = fs::read(path).unwrap();
    u64::from_le_bytes(bytes[8..16].try_into().unwrap())
}

fn run(dir: &TempDir, args: &[&str]) {
    segre().current_dir(dir.path()).args(args).assert().success();
}

#[test]
fn enumerate_s2() {
    let dir = TempDir::new().unwrap();
    run(&dir, &["enumerate", "--q", "3", "--k", "2", "--out", "h2"]);
    let bytes = fs::read(dir.path().join("h2")).unwrap();
    assert_eq!(&bytes[..4], b"SVHY");
    assert_eq!(count(&dir.path().join("h2")), 40);
    assert_eq!(bytes.len(), 16 + 40 * 2);
}

#[test]
fn pipeline_s2_to_s3() {
    let dir = TempDir::new().unwrap();
    run(&dir, &["enumerate", "--q", "3", "--k", "2", "--out", "h2"]);
    run(&dir, &["lines", "--hyps", "h2", "--out", "l2", "--include-nonprojective-members"]);
    run(&dir, &["lines", "--hyps", "h2", "--out", "l2fast", "--projective-fast"]);
    assert_eq!(count(&dir.path().join("l2")), 136);
    assert_eq!(count(&dir.path().join("l2fast")), 130);

    run(&dir, &["classify-lines", "--lines", "l2", "--hyps", "h2", "--report", "lines.tsv"]);
    let report = fs::read_to_string(dir.path().join("lines.tsv")).unwrap();
    let counts: Vec<&str> = report.lines().skip(1).map(|l| l.split('\t').nth(4).unwrap()).collect();
    assert_eq!(counts, ["8", "72", "32", "18", "6"]);
    assert!(report.starts_with("type\tcore_points\tcore_lines\tcomposition\tcount\tprojective\n"));

    run(&dir, &["orbits", "--hyps", "h2", "--report", "orbits.tsv"]);
    let orbits = fs::read_to_string(dir.path().join("orbits.tsv")).unwrap();
    assert_eq!(orbits.lines().count(), 3);

    run(&dir, &["blowup", "--lines", "l2", "--hyps", "h2", "--out", "h3"]);
    run(&dir, &["enumerate", "--q", "3", "--k", "3", "--out", "h3e"]);
    assert_eq!(fs::read(dir.path().join("h3")).unwrap(), fs::read(dir.path().join("h3e")).unwrap());
    assert_eq!(count(&dir.path().join("h3.prov")), 3424);

    run(&dir, &["classify-hyperplanes", "--hyps", "h3", "--report", "h3.tsv"]);
    let table = fs::read_to_string(dir.path().join("h3.tsv")).unwrap();
    let rows: Vec<Vec<&str>> = table.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    let summary: Vec<(&str, &str, &str, &str)> = rows.iter().map(|r| (r[0], r[1], r[2], r[6])).collect();
    assert_eq!(
        summary,
        [
            ("H1", "37", "21", "64"),
            ("H2", "28", "12", "288"),
            ("H3", "22", "6", "1728"),
            ("H4", "19", "3", "768"),
            ("H5", "16", "0", "432"),
            ("H5*", "16", "0", "144"),
        ]
    );
}

#[test]
fn same_output_for_any_thread_count() {
    let dir = TempDir::new().unwrap();
    run(&dir, &["--threads", "1", "enumerate", "--q", "3", "--k", "2", "--out", "a"]);
    run(&dir, &["--threads", "3", "enumerate", "--q", "3", "--k", "2", "--out", "b"]);
    run(&dir, &["--threads", "1", "lines", "--hyps", "a", "--out", "la", "--include-nonprojective-members"]);
    run(&dir, &["--threads", "3", "lines", "--hyps", "b", "--out", "lb", "--include-nonprojective-members"]);
    assert_eq!(fs::read(dir.path().join("a")).unwrap(), fs::read(dir.path().join("b")).unwrap());
    assert_eq!(fs::read(dir.path().join("la")).unwrap(), fs::read(dir.path().join("lb")).unwrap());
}

#[test]
fn verify_small_suites() {
    for suite in ["table1", "table2"] {
        segre().args(["verify", "--suite", suite]).assert().success().stdout(predicates::str::contains("PASS"));
    }
}

#[test]
fn usage_and_format_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    segre().args(["verify", "--suite", "table99"]).assert().code(2);
    segre().args(["enumerate", "--q", "5", "--k", "2", "--out", "x"]).current_dir(dir.path()).assert().code(2);
    segre().args(["frobnicate"]).assert().code(2);

    run(&dir, &["enumerate", "--q", "3", "--k", "2", "--out", "h2"]);
    let mut bad = fs::read(dir.path().join("h2")).unwrap();
    bad[0] = b'X';
    fs::write(dir.path().join("bad"), &bad).unwrap();
    segre().current_dir(dir.path()).args(["lines", "--hyps", "bad", "--out", "l"]).assert().code(2);

    let mut version = fs::read(dir.path().join("h2")).unwrap();
    version[4] = 99;
    fs::write(dir.path().join("version"), &version).unwrap();
    segre().current_dir(dir.path()).args(["lines", "--hyps", "version", "--out", "l"]).assert().code(2);

    run(&dir, &["enumerate", "--q", "2", "--k", "2", "--out", "b2"]);
    run(&dir, &["lines", "--hyps", "b2", "--out", "lb2"]);
    assert_eq!(count(&dir.path().join("lb2")), 35);
    segre()
        .current_dir(dir.path())
        .args(["classify-lines", "--lines", "lb2", "--hyps", "h2", "--report", "r"])
        .assert()
        .code(2);
}
