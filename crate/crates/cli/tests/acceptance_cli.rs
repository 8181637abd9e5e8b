//! CLI acceptance: byte-identical reruns (criterion 8), exit codes, and the
//! gen | decide pipe contract.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hypermatch")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(bin())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary exits")
}

fn digest(bytes: &[u8]) -> u64 {
    // FNV-1a is plenty for comparing reruns
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Criterion 8: every command, run twice with identical inputs and flags,
/// produces byte-identical stdout.
#[test]
fn acceptance_8_byte_determinism() {
    let space = run(&["gen", "space", "--n", "6", "--k", "3"]);
    let space_text = String::from_utf8(space.stdout.clone()).unwrap();
    std::fs::write("/tmp/hypermatch_det_space.txt", &space_text).unwrap();
    let random = run(&["gen", "random", "--n", "9", "--k", "3", "--p", "1/2", "--seed", "7"]);
    let random_text = String::from_utf8(random.stdout.clone()).unwrap();
    std::fs::write("/tmp/hypermatch_det_random.txt", &random_text).unwrap();

    let batteries: Vec<Vec<&str>> = vec![
        vec!["gen", "space", "--n", "12", "--k", "3"],
        vec!["gen", "cover", "--n", "9", "--k", "3"],
        vec!["gen", "lattice", "--parts", "3,3", "--k", "3", "--allowed", "3,0;1,2"],
        vec!["gen", "random", "--n", "9", "--k", "3", "--p", "1/2", "--seed", "7"],
        vec!["decide", "--input", "/tmp/hypermatch_det_space.txt", "--ell", "2"],
        vec!["decide", "--input", "/tmp/hypermatch_det_space.txt", "--ell", "2", "--json"],
        vec!["decide", "--input", "/tmp/hypermatch_det_random.txt", "--ell", "2", "--json"],
        vec!["oracle", "--input", "/tmp/hypermatch_det_random.txt"],
        vec!["oracle", "--input", "/tmp/hypermatch_det_random.txt", "--json"],
        vec!["fractional", "--input", "/tmp/hypermatch_det_space.txt", "--witness"],
        vec!["fractional", "--input", "/tmp/hypermatch_det_random.txt", "--json", "--witness"],
        vec!["partition", "--input", "/tmp/hypermatch_det_random.txt"],
        vec!["lattice-info", "--input", "/tmp/hypermatch_det_space.txt"],
    ];
    let mut compared = 0;
    for args in &batteries {
        let a = run(args);
        let b = run(args);
        assert_eq!(
            digest(&a.stdout),
            digest(&b.stdout),
            "stdout differs across reruns of {:?}",
            args
        );
        assert_eq!(a.status.code(), b.status.code(), "exit codes differ for {:?}", args);
        compared += 1;
    }

    // cross-validate writes a file; compare file bytes across runs
    for pass in 0..2 {
        let out = format!("/tmp/hypermatch_det_cv_{}.csv", pass);
        let st = run(&[
            "cross-validate",
            "--family",
            "random:n=9,k=3,p=1/2",
            "--count",
            "10",
            "--seed",
            "5",
            "--out",
            &out,
        ]);
        assert!(st.status.success());
    }
    let cv0 = std::fs::read("/tmp/hypermatch_det_cv_0.csv").unwrap();
    let cv1 = std::fs::read("/tmp/hypermatch_det_cv_1.csv").unwrap();
    assert_eq!(digest(&cv0), digest(&cv1), "cross-validate CSV differs across reruns");
    compared += 1;

    println!("ACCEPTANCE 8: PASS - {} command batteries byte-identical across reruns", compared);
}

#[test]
fn exit_codes_follow_the_contract() {
    // yes-with-matching: 0
    let complete = run_with_stdin(
        &["decide", "--input", "-", "--ell", "2"],
        &run(&["gen", "random", "--n", "6", "--k", "3", "--p", "1", "--seed", "0"])
            .stdout
            .iter()
            .map(|&b| b as char)
            .collect::<String>(),
    );
    assert_eq!(complete.status.code(), Some(0));

    // no-with-certificate: 1
    let space = run(&["gen", "space", "--n", "6", "--k", "3"]);
    let no = run_with_stdin(
        &["decide", "--input", "-", "--ell", "2"],
        std::str::from_utf8(&space.stdout).unwrap(),
    );
    assert_eq!(no.status.code(), Some(1));

    // error: 2
    let err = run(&["decide", "--input", "/nonexistent/file", "--ell", "2"]);
    assert_eq!(err.status.code(), Some(2));
    let parse_err = run_with_stdin(&["decide", "--input", "-", "--ell", "2"], "3 6 1\n0 0 1\n");
    assert_eq!(parse_err.status.code(), Some(2));

    // oracle: 0 when found, 1 when not
    let found = run_with_stdin(
        &["oracle", "--input", "-"],
        &String::from_utf8(run(&["gen", "random", "--n", "6", "--k", "3", "--p", "1", "--seed", "0"]).stdout).unwrap(),
    );
    assert_eq!(found.status.code(), Some(0));
    let none = run_with_stdin(&["oracle", "--input", "-"], std::str::from_utf8(&space.stdout).unwrap());
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn gen_pipes_into_decide() {
    let gen = run(&["gen", "cover", "--n", "9", "--k", "3"]);
    assert!(gen.status.success());
    let text = String::from_utf8(gen.stdout).unwrap();
    assert!(text.starts_with("3 9 "));
    let decide = run_with_stdin(&["decide", "--input", "-", "--ell", "2"], &text);
    assert_eq!(decide.status.code(), Some(1), "cover barrier has no perfect matching");
    let stdout = String::from_utf8(decide.stdout).unwrap();
    assert!(stdout.contains("no perfect matching"), "{}", stdout);
}

#[test]
fn decide_json_has_the_documented_shape() {
    let space = run(&["gen", "space", "--n", "6", "--k", "3"]);
    let out = run_with_stdin(
        &["decide", "--input", "-", "--ell", "2", "--json"],
        std::str::from_utf8(&space.stdout).unwrap(),
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    let verdict = &doc["verdict"]["NoPerfectMatching"]["Insoluble"];
    assert!(verdict["lattice_basis"].is_array());
    assert!(verdict["coset_order"].is_number());
    assert!(doc["trace"]["stages"].is_array());
}

#[test]
fn fractional_prints_exact_rationals() {
    let cover = run(&["gen", "cover", "--n", "9", "--k", "3"]);
    let out = run_with_stdin(&["fractional", "--input", "-"], std::str::from_utf8(&cover.stdout).unwrap());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2");

    let k6 = run(&["gen", "random", "--n", "6", "--k", "3", "--p", "1", "--seed", "0"]);
    let out = run_with_stdin(&["fractional", "--input", "-"], std::str::from_utf8(&k6.stdout).unwrap());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2");
}
