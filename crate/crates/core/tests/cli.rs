use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use pivotal_lp::instances::canned_example;
use pivotal_lp::io::parse_report_json;
use pivotal_lp::serialize_instance;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pivotal-lp"));
    cmd.env_remove("PIVOTAL_LP_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Writes `text` to a fresh file under the target temp directory.
fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn example_file(id: u32) -> PathBuf {
    temp_file(
        &format!("example{id}.lp"),
        &serialize_instance(&canned_example(id).unwrap().instance),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn solve_example1() {
    let ex = example_file(1);
    let out = run(&["solve", p(&ex), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "Optimum");
    assert_eq!(v["x"], serde_json::json!([5.0, 5.0]));
    assert_eq!(v["y"], serde_json::json!([1.0, 2.0]));
    assert!(out.stderr.is_empty());
}

#[test]
fn solve_example4_reports_no_solution() {
    let out = run(&["solve", p(&example_file(4))]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.starts_with("status: NoSolution"), "{text}");
    assert!(text.contains("na"));
}

#[test]
fn solve_example5_index_rule() {
    let out = run(&[
        "solve",
        p(&example_file(5)),
        "--rule",
        "index",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc = parse_report_json(&stdout(&out)).unwrap();
    assert_eq!(doc.iterations, 3);
}

#[test]
fn solve_reads_standard_input_in_exact_mode() {
    let mut child = bin()
        .args(["solve", "-", "--scalar", "rational", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let text = serialize_instance(&canned_example(5).unwrap().instance);
    child
        .stdin
        .take()
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["x"], serde_json::json!(["16/19", "0", "0", "5/19"]));
}

#[test]
fn cap_factor_below_one_is_rejected() {
    // A factor below 1 is a configuration error.
    let out = run(&["solve", p(&example_file(5)), "--max-iter-factor", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn parse_and_config_errors_exit_2() {
    let bad = temp_file("bad.lp", "2 2\n-1 1\n1 1\n10 -5\n");
    let out = run(&["solve", p(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing"));
    assert_eq!(code(&run(&["solve", "/nonexistent/file.lp"])), 2);
    assert_eq!(
        code(&run(&["solve", p(&example_file(1)), "--rule", "bogus"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "solve",
            p(&example_file(1)),
            "--scalar",
            "rational",
            "--tol",
            "1e-9"
        ])),
        2
    );
}

#[test]
fn tolerance_from_environment_and_flag_precedence() {
    let ex = example_file(1);
    let env_bad = bin()
        .args(["solve", p(&ex)])
        .env("PIVOTAL_LP_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&env_bad), 2);
    let flag_wins = bin()
        .args(["solve", p(&ex), "--tol", "1e-9"])
        .env("PIVOTAL_LP_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&flag_wins), 0);
    let env_ok = bin()
        .args(["solve", p(&ex)])
        .env("PIVOTAL_LP_TOL", "1e-10")
        .output()
        .unwrap();
    assert_eq!(code(&env_ok), 0);
}

#[test]
fn verify_certificates() {
    let ex1 = example_file(1);
    assert_eq!(
        code(&run(&["verify", p(&ex1), "--x", "5,5", "--y", "1,2"])),
        0
    );
    let bad = run(&["verify", p(&ex1), "--x", "5,4", "--y", "1,2"]);
    assert_eq!(code(&bad), 1);
    assert!(
        stdout(&bad).contains("duality gap: 1e0"),
        "{}",
        stdout(&bad)
    );
    assert_eq!(
        code(&run(&["verify", p(&ex1), "--x", "5", "--y", "1,2"])),
        2
    );

    let ex5 = example_file(5);
    let rounded = [
        "verify",
        p(&ex5),
        "--x",
        "0.8421,0,0,0.2632",
        "--y",
        "0.0263,1.3947,0",
    ];
    assert_eq!(code(&run(&[&rounded[..], &["--tol", "1e-3"]].concat())), 0);
    assert_eq!(code(&run(&rounded)), 1);
}

#[test]
fn verify_a_saved_report() {
    let ex5 = example_file(5);
    // Binary64 reports carry 12 significant digits; exact ones are exact.
    for (scalar, tol) in [("f64", "1e-9"), ("rational", "0")] {
        let solved = run(&["solve", p(&ex5), "--scalar", scalar, "--format", "json"]);
        let report = temp_file(&format!("example5-{scalar}.json"), &stdout(&solved));
        let out = run(&[
            "verify",
            p(&ex5),
            "--result",
            p(&report),
            "--scalar",
            scalar,
            "--tol",
            tol,
        ]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
}

#[test]
fn oracle_verdicts() {
    let out = run(&["oracle", p(&example_file(4))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("Infeasible"));

    let out = run(&["oracle", p(&example_file(1))]);
    assert_eq!(code(&out), 0);
    assert!(
        stdout(&out).contains("objective: 0.000000"),
        "{}",
        stdout(&out)
    );

    let toy = temp_file("unbounded.lp", "1 1\n1\n-1\n0\n");
    let out = run(&["oracle", p(&toy)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("Unbounded"));

    let wide = pivotal_lp::instances::random_instance(13, 12, 1, -9, 9).unwrap();
    let out = run(&[
        "oracle",
        p(&temp_file("wide.lp", &serialize_instance(&wide))),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn generators() {
    let out = run(&["gen", "example", "--id", "2"]);
    assert_eq!(
        stdout(&out),
        "3 3\n100 10 1\n1 0 0\n20 1 0\n200 20 1\n1 100 10000\n"
    );
    assert_eq!(
        stdout(&run(&["gen", "klee-minty", "--n", "1"])),
        "1 1\n1\n1\n1\n"
    );
    let a = run(&["gen", "random", "--k", "2", "--n", "2", "--seed", "42"]);
    let b = run(&["gen", "random", "--k", "2", "--n", "2", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&run(&["gen", "example", "--id", "9"])), 2);
    assert_eq!(code(&run(&["gen", "klee-minty", "--n", "0"])), 2);
    assert_eq!(
        code(&run(&[
            "gen", "random", "--k", "2", "--n", "2", "--seed", "1", "--lo", "3", "--hi", "1"
        ])),
        2
    );
}

#[test]
fn trace_command() {
    let out = run(&["trace", p(&example_file(1))]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("P0\n"));
    assert!(text.contains("Z(1)") && text.contains("P(2)"));
    assert!(text.contains("0.090909"));
}

#[test]
fn bench_table() {
    let out = run(&["bench", "--count", "5", "--klee-minty-max", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("example5: value=5 index=3"), "{text}");
    assert!(text.contains("klee-minty n=3: value=1 index=2"), "{text}");
    let random_rows: Vec<&str> = text.lines().filter(|l| l.starts_with("random")).collect();
    assert_eq!(random_rows.len(), 5);
    assert!(
        random_rows.iter().all(|l| l.ends_with("agreement=ok")),
        "{text}"
    );
    assert!(text.lines().last().unwrap().starts_with("mean:"));
    assert_eq!(
        text,
        stdout(&run(&["bench", "--count", "5", "--klee-minty-max", "3"]))
    );
}
