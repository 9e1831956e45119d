use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use x3sat::corpus::golden_trace;
use x3sat::io::{parse_report, parse_trace};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.x3f"))
}

fn x3sat(args: &[&str]) -> (i32, String) {
    let Output { status, stdout, .. } = Command::new(env!("CARGO_BIN_EXE_x3sat"))
        .args(args)
        .output()
        .unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap())
}

#[test]
fn brute_lists_both_models() {
    let paper = corpus("paper");
    let (code, out) = x3sat(&["solve", paper.to_str().unwrap(), "--algorithm", "brute"]);
    assert_eq!(code, 10);
    assert!(
        out.contains("v 0,0,1,0,1\n") && out.contains("v 0,1,0,0,0\n"),
        "{out}"
    );
}

#[test]
fn dpll_finds_a_model() {
    let (code, out) = x3sat(&["solve", corpus("paper").to_str().unwrap(), "--algorithm", "dpll"]);
    assert_eq!(code, 10);
    assert!(out.contains("s SATISFIABLE"));
}

#[test]
fn salum_answer_is_flagged_on_every_corpus_entry() {
    for e in x3sat::corpus::entries() {
        let token = e.policy.to_string();
        let (order, polarity) = token.rsplit_once('/').unwrap();
        let path = corpus(e.name);
        let (code, out) = x3sat(&[
            "solve",
            path.to_str().unwrap(),
            "--order",
            order,
            "--polarity",
            polarity,
        ]);
        assert_eq!(code, 30, "{}: {out}", e.name);
        assert!(out.contains("s UNSATISFIABLE\nc UNVERIFIED"), "{out}");
    }
}

#[test]
fn salum_verified_answers() {
    let dir = tempfile::tempdir().unwrap();
    let sat = dir.path().join("sat.x3f");
    fs::write(&sat, "p x3f 3 1\n1 2 3 0\n").unwrap();
    let (code, out) = x3sat(&["solve", sat.to_str().unwrap()]);
    assert_eq!(code, 10, "{out}");
    assert!(out.contains("v 1,0,0"));
    let unsat = dir.path().join("unsat.x3f");
    fs::write(&unsat, "p x3f 2 2\n1 2 0\n1 -2 0\n-1 0\n").unwrap();
    // Header count mismatch is a parse error.
    assert_eq!(x3sat(&["solve", unsat.to_str().unwrap()]).0, 3);
    fs::write(&unsat, "p x3f 2 3\n1 2 0\n1 -2 0\n-1 0\n").unwrap();
    assert_eq!(x3sat(&["solve", unsat.to_str().unwrap()]).0, 20);
}

#[test]
fn trace_file_meets_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("paper.trace");
    let (code, stdout) = x3sat(&[
        "trace",
        corpus("paper").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("s UNSATISFIABLE"));
    let trace = parse_trace(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(trace.replay(), Ok(()));
    assert_eq!(golden_trace().first_missing(&trace), None);
}

#[test]
fn verify_exit_codes() {
    let paper = corpus("paper");
    let p = paper.to_str().unwrap();
    assert_eq!(x3sat(&["verify", p, "0,1,0,0,0"]).0, 0);
    assert_eq!(x3sat(&["verify", p, "1,1,0,0,0"]).0, 1);
    assert_eq!(x3sat(&["verify", p, "0,1"]).0, 2);
    assert_eq!(x3sat(&["verify", p, "0,1,0,0,x"]).0, 2);
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(x3sat(&["solve"]).0, 2);
    assert_eq!(x3sat(&["solve", "/nonexistent/file.x3f"]).0, 2);
    assert_eq!(
        x3sat(&["solve", corpus("paper").to_str().unwrap(), "--order", "sideways"]).0,
        2
    );
    assert_eq!(
        x3sat(&["solve", corpus("paper").to_str().unwrap(), "--order", "fixed:1,1"]).0,
        2
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.x3f");
    fs::write(&bad, "p x3f 2 1\n1 1 0\n").unwrap();
    assert_eq!(x3sat(&["solve", bad.to_str().unwrap()]).0, 3);
}

#[test]
fn fuzz_then_shrink() {
    let dir = tempfile::tempdir().unwrap();
    let reports = dir.path().join("reports");
    let (code, out) = x3sat(&[
        "fuzz",
        "--seed",
        "1",
        "--num",
        "40",
        "--vars",
        "6",
        "--clauses",
        "5",
        "--report-dir",
        reports.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(code, 0);
    let count: usize = out
        .lines()
        .find_map(|l| l.strip_prefix("disagreements "))
        .unwrap()
        .parse()
        .unwrap();
    let files: Vec<PathBuf> = fs::read_dir(&reports)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert!(count > 0);
    assert_eq!(files.len(), count);

    let path = &files[0];
    let before = parse_report(&fs::read_to_string(path).unwrap()).unwrap();
    let (code, _) = x3sat(&["shrink", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let after = parse_report(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(after.policy, before.policy);
    assert_eq!(after.salum_sat, before.salum_sat);
    assert!(after.document.formula.literal_count() <= before.document.formula.literal_count());
    // Shrinking again is a no-op.
    let once = fs::read_to_string(path).unwrap();
    assert_eq!(x3sat(&["shrink", path.to_str().unwrap()]).0, 0);
    assert_eq!(fs::read_to_string(path).unwrap(), once);
}

#[test]
fn shrink_rejects_stale_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.x3r");
    fs::write(&path, "p x3f 3 1\n1 2 3 0\nv lex/pos unsat sat\nw 100\n").unwrap();
    assert_eq!(x3sat(&["shrink", path.to_str().unwrap()]).0, 1);
    fs::write(&path, "p x3f 3 1\n1 2 3 0\n").unwrap();
    assert_eq!(x3sat(&["shrink", path.to_str().unwrap()]).0, 3);
}

#[test]
fn corpus_command_reproduces_shipped_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(x3sat(&["corpus", "--out", dir.path().to_str().unwrap()]).0, 0);
    for e in x3sat::corpus::entries() {
        let fresh = fs::read(dir.path().join(format!("{}.x3f", e.name))).unwrap();
        assert_eq!(fresh, fs::read(corpus(e.name)).unwrap(), "{}", e.name);
    }
}
