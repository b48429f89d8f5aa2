//! Runs the `fsg` binary on the fixtures. Outputs are compared with the files
//! in `tests/golden`; set `FSG_BLESS=1` to rewrite them.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_fsg");

fn run_with(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn run(args: &[&str]) -> Output {
    run_with(args, "", &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str]) {
    let first = run(args);
    assert_eq!(first.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&first.stderr));
    let again = run(args);
    assert_eq!(first.stdout, again.stdout, "{name}: output differs between runs");
    let path = Path::new("tests/golden").join(format!("{name}.txt"));
    let got = stdout(&first);
    if std::env::var_os("FSG_BLESS").is_some() {
        fs::write(&path, &got).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name}: differs from {}", path.display());
}

const CHAIN: &str = "tests/fixtures/chain.json";
const CHAIN2: &str = "tests/fixtures/chain2.json";

#[test]
fn golden_eval() {
    golden("eval_mu_reach", &["eval", "--logic", "mu", "--formula", "mu X.(p | <>X)", "--model", CHAIN]);
    golden("eval_mu_safety", &["eval", "--logic", "mu", "--formula", "nu Y.(q & []Y)", "--model", CHAIN]);
    golden("eval_ml_point", &["eval", "--logic", "ml", "--formula", "<>[]p", "--model", CHAIN, "--point", "w0"]);
    golden("eval_ml2", &["eval", "--logic", "ml2", "--formula", "<1><2>(p | q)", "--model", CHAIN2]);
}

#[test]
fn golden_bisim() {
    golden("bisim_depth0", &["bisim", "--n", "0", CHAIN, CHAIN2]);
    golden("bisim_depth1", &["bisim", "--n", "1", CHAIN, CHAIN2]);
    golden("bisim_full", &["bisim", "--full", CHAIN, CHAIN]);
}

#[test]
fn golden_synth_and_solve() {
    golden("synth_c1_d1", &["synth", "--a", "tests/fixtures/C1", "--b", "tests/fixtures/D1", "--max", "8"]);
    golden("synth_none", &["synth", "--a", "tests/fixtures/C2", "--b", "tests/fixtures/D2", "--max", "6"]);
    golden("solve_c2_d2", &["solve-ml", "--k", "2", "--a", "tests/fixtures/C2/", "--b", "tests/fixtures/D2/"]);
    golden("solve_c1_d1", &["solve-ml", "--k", "7", "--a", "tests/fixtures/C1", "--b", "tests/fixtures/D1"]);
}

#[test]
fn golden_play() {
    golden("play_ml_auto", &["play-ml", "--k", "7", "--a", "tests/fixtures/C1", "--b", "tests/fixtures/D1", "--seed", "3"]);
    golden(
        "play_ml_script",
        &["play-ml", "--k", "1", "--a", "tests/fixtures/C1", "--b", "tests/fixtures/D1", "--s", "script", "--s-script", "tests/scripts/ml_literal.txt"],
    );
    golden("play_ml_exhaustive", &["play-ml", "--k", "2", "--a", "tests/fixtures/C2", "--b", "tests/fixtures/D2", "--d", "exhaustive"]);
    golden("play_mu_uniform", &["play-mu", "--k", "5", "--a", CHAIN, "--b", CHAIN2, "--formula", "mu X.(p | <>X)"]);
    golden(
        "play_mu_exhaustive",
        &["play-mu", "--k", "5", "--a", CHAIN, "--b", CHAIN2, "--formula", "mu X.(p | <>X)", "--d", "exhaustive", "--responses", "all"],
    );
    golden("play_mu_json", &["play-mu", "--k", "1", "--a", "tests/fixtures/C2", "--b", "tests/fixtures/D2", "--json"]);
}

#[test]
fn golden_experiments_and_chroma() {
    golden("experiment_fo_ml2", &["experiment", "--suite", "fo-ml2-sizes", "--n", "3"]);
    golden("experiment_fo_ml2_report", &["experiment", "--suite", "fo-ml2-sizes", "--n", "2", "--format", "csv"]);
    golden("experiment_notbisim", &["experiment", "--suite", "notbisim", "--n", "2", "--format", "json"]);
    golden("experiment_ml_n1", &["experiment", "--suite", "ml-lower-bound", "--n", "1", "--plays", "5"]);
    golden("experiment_mu_n2", &["experiment", "--suite", "mu-lower-bound", "--n", "2"]);
    golden("chroma_k4", &["chroma", "tests/fixtures/k4.json"]);
    golden("chroma_pentagon", &["chroma", "tests/fixtures/pentagon.json"]);
}

#[test]
fn experiment_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sizes.csv");
    let o = run(&["experiment", "--suite", "fo-ml2-sizes", "--n", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().nth(3), Some("3,39,45,61,4"));
}

#[test]
fn human_play_reads_stdin() {
    let args = ["play-ml", "--k", "1", "--a", "tests/fixtures/C1", "--b", "tests/fixtures/D1", "--s", "human"];
    let o = run_with(&args, "7\n1\n", &[]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("[1] {\"kind\":\"lit\",\"literal\":\"F\"}"), "{err}");
    assert!(err.contains("enter an index below 2"));
    assert!(stdout(&o).ends_with("winner: D (literal F does not separate)\n"));
    assert_eq!(run_with(&args, "", &[]).status.code(), Some(2));
}

#[test]
fn synth_output_separates_when_fed_back() {
    let cases = [("tests/fixtures/C1", "tests/fixtures/D1", "8"), ("tests/fixtures/C2", "tests/fixtures/D2", "19")];
    for (a, b, max) in cases {
        let o = run(&["synth", "--a", a, "--b", b, "--max", max]);
        let formula = stdout(&o).lines().next().unwrap().to_string();
        for (dir, want) in [(a, "true"), (b, "false")] {
            let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
            files.sort();
            for f in files {
                let e = run(&["eval", "--logic", "ml", "--formula", &formula, "--model", f.to_str().unwrap()]);
                let last = stdout(&e).lines().last().unwrap().to_string();
                assert!(last.ends_with(want), "{formula} on {}: {last}", f.display());
            }
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["chroma", "tests/fixtures/k4.json", "--extra"]).status.code(), Some(1));
    assert_eq!(run(&["experiment", "--suite", "notbisim", "--n", "2", "--format", "table"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--logic", "ml", "--formula", "((", "--model", CHAIN]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--logic", "mu", "--formula", "<>X", "--model", CHAIN]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--logic", "ml", "--formula", "p", "--model", "tests/fixtures/missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--logic", "ml", "--formula", "p", "--model", CHAIN, "--point", "nowhere"]).status.code(), Some(2));
    assert_eq!(run(&["experiment", "--suite", "notbisim", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["play-mu", "--k", "3", "--a", CHAIN, "--b", CHAIN2, "--formula", "mu X.(p | <>X)"]).status.code(), Some(2));
    assert_eq!(run(&["solve-ml", "--k", "5", "--a", "tests/fixtures/C2", "--b", "tests/fixtures/D2", "--budget", "3"]).status.code(), Some(3));
    let workers = run_with(&["chroma", "tests/fixtures/k4.json"], "", &[("FSG_WORKERS", "zero")]);
    assert_eq!(workers.status.code(), Some(1));
}

#[test]
fn worker_count_does_not_change_results() {
    let args = ["synth", "--a", "tests/fixtures/C2", "--b", "tests/fixtures/D2", "--max", "19"];
    let one = run_with(&args, "", &[("FSG_WORKERS", "1")]);
    let four = run_with(&args, "", &[("FSG_WORKERS", "4")]);
    assert_eq!(one.stdout, four.stdout);
}
