//! End-to-end checks of the command-line driver.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn autlearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autlearn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn learn_then_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = autlearn(&[
        "learn",
        "eqfac",
        "--sequence",
        "thue-morse",
        "--out",
        out_dir,
        "--format",
        "canonical,dot,walnut",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("15 states (14 trimmed)"));

    let automaton = dir.path().join("eqfac-thue-morse.txt");
    for file in ["eqfac-thue-morse.txt", "eqfac-thue-morse.dot", "eqfac-thue-morse.walnut.txt", "eqfac-thue-morse.stats.txt"] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }

    let verify = autlearn(&[
        "verify",
        "eqfac",
        automaton.to_str().unwrap(),
        "--sequence",
        "thue-morse",
    ]);
    assert!(verify.status.success());
    assert_eq!(stdout(&verify).trim(), "correct");

    // the exported file re-imports to a language-equivalent automaton
    let parsed = autlearn::format::parse_dfa(&fs::read_to_string(&automaton).unwrap()).unwrap();
    assert_eq!(parsed.state_count(), 15);
}

#[test]
fn stats_are_byte_identical_across_runs() {
    let run = |dir: &Path| {
        let out = autlearn(&[
            "learn",
            "partial-sum",
            "--sequence",
            "thue-morse",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        fs::read(dir.join("partial-sum-thue-morse.stats.txt")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(run(d1.path()), run(d2.path()));
}

#[test]
fn eval_prints_membership_verdicts() {
    let cases = [
        (vec!["eval", "eqfac", "thue-morse", "0", "3", "2"], "true"),
        (vec!["eval", "period", "thue-morse", "0", "4", "0"], "true"),
        (vec!["eval", "adder", "base2", "3", "5", "9"], "false"),
        (vec!["eval", "partial-sum", "rarefied-thue-morse", "1", "1"], "true"),
    ];
    for (args, expect) in cases {
        let out = autlearn(&args);
        assert!(out.status.success(), "{args:?}");
        assert_eq!(stdout(&out).trim(), expect, "{args:?}");
    }
}

#[test]
fn sequences_load_from_dfao_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.txt");
    let dfao = autlearn::sequence::SequenceDfao::fibonacci_word();
    fs::write(&path, autlearn::format::write_dfao(&dfao)).unwrap();
    // f(4) = 1, f(5) = 0 on the fibonacci word 0100101001...
    let out = autlearn(&["eval", "eqfac", path.to_str().unwrap(), "4", "1", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn malformed_integers_exit_one() {
    let out = autlearn(&["eval", "eqfac", "thue-morse", "0", "x", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = autlearn(&[
        "learn",
        "eqfac",
        "--sequence",
        "thue-morse",
        "--max-queries",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_detects_a_flipped_accepting_bit() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = autlearn(&["learn", "eqfac", "--sequence", "thue-morse", "--out", out_dir]);
    assert!(out.status.success());
    let path = dir.path().join("eqfac-thue-morse.txt");
    let text = fs::read_to_string(&path).unwrap();
    // flip state 0 out of the accepting set (it accepts the empty word)
    let mutated = text.replace("accepting 0 ", "accepting ");
    assert_ne!(mutated, text);
    fs::write(&path, mutated).unwrap();
    let verify = autlearn(&[
        "verify",
        "eqfac",
        path.to_str().unwrap(),
        "--sequence",
        "thue-morse",
    ]);
    assert!(verify.status.success());
    assert!(stdout(&verify).starts_with("counterexample"), "{}", stdout(&verify));
}

#[test]
fn verify_rejects_wrong_arity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.txt");
    let pair = autlearn::numeration::lt_relation(2);
    fs::write(&path, autlearn::format::write_dfa(&pair)).unwrap();
    let out = autlearn(&[
        "verify",
        "eqfac",
        path.to_str().unwrap(),
        "--sequence",
        "thue-morse",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_runs_for_base_k_and_refuses_tribonacci() {
    let out = autlearn(&["compare", "--sequence", "thue-morse"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("routes_language_equivalent=true"), "{text}");
    assert!(text.contains("peak_intermediate_states="));

    let refused = autlearn(&["compare", "--sequence", "tribonacci-word"]);
    assert_eq!(refused.status.code(), Some(1));
}

#[test]
fn learn_adder_for_zeckendorf_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = autlearn(&[
        "learn",
        "adder",
        "--system",
        "zeckendorf",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("adder-zeckendorf.txt");
    let adder = autlearn::format::parse_dfa(&fs::read_to_string(&path).unwrap()).unwrap();
    // reuse it through --adder for a fibonacci-word eqfac run
    let dir2 = tempfile::tempdir().unwrap();
    let out2 = autlearn(&[
        "learn",
        "eqfac",
        "--sequence",
        "fibonacci-word",
        "--adder",
        path.to_str().unwrap(),
        "--out",
        dir2.path().to_str().unwrap(),
    ]);
    assert!(out2.status.success(), "{}", String::from_utf8_lossy(&out2.stderr));
    assert!(stdout(&out2).contains("12 states"));
    let _ = adder;
}

#[test]
fn partial_sum_from_synchronized_file() {
    // export the thue-morse synchronized automaton and feed it back in
    let tm = autlearn::sequence::SequenceDfao::thue_morse();
    let b = tm.synchronized();
    let systems = vec![tm.system().clone(), tm.system().clone()];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tm-sync.txt");
    fs::write(&path, autlearn::format::write_synchronized(&b, &systems)).unwrap();
    let out = autlearn(&[
        "learn",
        "partial-sum",
        "--synchronized",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("7 states"));
}
