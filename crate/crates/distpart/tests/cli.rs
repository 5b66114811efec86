//! End-to-end checks of the command line binary: exact example outputs,
//! byte determinism, format round-trips, and exit codes.

use distpart::hypercore::LabeledHypergraph;
use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_distpart"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn run_with_stdin(args: &[&str], input: &str) -> (Option<i32>, String) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .as_mut()
        .expect("stdin")
        .write_all(input.as_bytes())
        .expect("write stdin");
    let out = child.wait_with_output().expect("wait");
    (out.status.code(), String::from_utf8(out.stdout).expect("utf8"))
}

#[test]
fn params_example_exact() {
    assert_eq!(run_ok(&["params", "--n1", "4", "--m2", "3"]), "j=0 k=1 r=8/3\n");
    assert_eq!(run_ok(&["params", "--n1", "3", "--m2", "2"]), "j=0 k=0 r=2\n");
}

#[test]
fn m2_2_chain_emits_expected_lines() {
    let out = run_ok(&["construct", "m2-2", "--m1", "6"]);
    assert!(out.contains("\nn2 13/1\n"), "missing n2 line: {out}");
    assert!(out.ends_with("cert ok\n"));
}

#[test]
fn construct_output_reparses_identically() {
    let out = run_ok(&["construct", "ring", "--n1", "2", "--m2", "1", "--edges", "6"]);
    let mark = out.find("n2 ").expect("report lines");
    let text = &out[..mark];
    let h = LabeledHypergraph::parse(text).expect("round-trip parse");
    assert_eq!(h.to_text(), text);
}

#[test]
fn verify_accepts_ring_and_rejects_symmetric_path() {
    let ring = run_ok(&["construct", "ring", "--n1", "2", "--m2", "1", "--edges", "6"]);
    let mark = ring.find("n2 ").expect("report lines");
    let (code, stdout) = run_with_stdin(&["verify"], &ring[..mark]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout, "cert ok group_order=1\n");

    let sym = "m2 0\nvertex 0 -\nvertex 1 -\nvertex 2 -\nedge 0 0 1\nedge 1 1 2\n";
    let (code, stdout) = run_with_stdin(&["verify"], sym);
    assert_eq!(code, Some(1));
    assert_eq!(stdout, "cert fail group_order=2\n");
}

#[test]
fn tau_prime_from_partition_text() {
    let partition = "shape 2 2 2\ncell 0:0 1:0\ncell 0:1 2:0\ncell 1:1 2:1\n";
    let (code, stdout) = run_with_stdin(&["tau-prime", "--m2-parts", "2"], partition);
    assert_eq!(code, Some(0));
    let h = LabeledHypergraph::parse(&stdout).expect("parse tau-prime output");
    assert_eq!(h.m2(), 1);
    assert_eq!(h.edge_count(), 2);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "construct", "regular", "--psi", "0", "--s", "3", "--t", "12", "--n1", "3",
        "--t-floor", "12", "--seed", "7",
    ];
    let a = run_ok(&args);
    let b = run_ok(&args);
    assert_eq!(a, b);
    assert!(a.contains("\nseed 7\n"));
    assert!(a.contains("\nt_floor 12\n"));
}

#[test]
fn json_lines_parse_as_json() {
    let out = run_ok(&[
        "t-star", "--n1", "2", "--m2", "1", "--max-edges", "8", "--format", "json-lines",
    ]);
    assert_eq!(out.lines().count(), 5);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("json line");
        assert!(v.is_object());
    }
}

#[test]
fn exit_code_one_on_domain_error() {
    let out = bin()
        .args(["construct", "ring", "--n1", "2", "--m2", "1", "--edges", "5"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn count_trees_rows_match_recurrence() {
    let out = run_ok(&["count-trees", "--max-edges", "8"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[5], "edges=6 count=1");
    assert_eq!(lines[6], "edges=7 count=1");
    assert_eq!(lines[7], "edges=8 count=3");
}
