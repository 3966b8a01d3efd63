use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

const E1: &str = "ksub 1\nk=3 n=1\n0 0\n1 -1\n2 1\n3 2\n";
const H: &str = "ksub 1\nk=2 n=1\n0 0\n1 -1\n2 -1\n";

fn ksub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn minimize_reports_value_and_minimizer() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e1.txt", E1);
    let output = ksub(&["minimize", &file]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output), "min -1\nargmin 1\n");
}

#[test]
fn minimize_certificate_matches_the_dual() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e1.txt", E1);
    let output = ksub(&["minimize", "--certificate", &file]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("value -1\nprimal 1\nx 1\nL 2\n"), "{text}");
}

#[test]
fn check_prints_the_violating_pair() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "h.txt", H);
    let output = ksub(&["check", &file]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("k-submodular: fails T=(1) U=(2)"), "{text}");
    let output = ksub(&["check", "--mode", "super", &file]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let status = ksub(&[
            "generate", "--kind", "unary", "--k", "3", "--n", "2", "--seed", "7", "--output",
            path.to_str().unwrap(),
        ])
        .status;
        assert!(status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let output = ksub(&["minimize", "--certificate", a.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn generated_tables_pass_their_checks() {
    let dir = TempDir::new().unwrap();
    for (kind, command) in [("random", "verify-ft"), ("rank", "multimatroid"), ("random", "check")] {
        let path = dir.path().join(format!("{kind}.txt"));
        let output = ksub(&["generate", "--kind", kind, "--k", "2", "--n", "2", "--seed", "3"]);
        assert!(output.status.success());
        fs::write(&path, &output.stdout).unwrap();
        let output = ksub(&[command, path.to_str().unwrap()]);
        assert_eq!(output.status.code(), Some(0), "{kind} {command}: {}", stdout(&output));
    }
}

#[test]
fn dual_integer_and_rational_agree() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e1.txt", E1);
    let rational = stdout(&ksub(&["dual", &file]));
    let integer = stdout(&ksub(&["dual", "--integer", &file]));
    assert_eq!(rational.lines().next(), Some("dual -1"));
    assert_eq!(integer.lines().next(), Some("dual -1"));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "empty.txt", "ksub 1\nk=3 n=1\n");
    let output = ksub(&["check", &file]);
    assert_eq!(output.status.code(), Some(2));
    let message = String::from_utf8(output.stderr).unwrap();
    assert!(message.contains("missing labeling 0"), "{message}");
    assert_eq!(ksub(&["check", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(ksub(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn budget_overruns_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e1.txt", E1);
    assert_eq!(ksub(&["--budget", "10", "check", &file]).status.code(), Some(3));
    assert_eq!(ksub(&["--budget", "100", "check", &file]).status.code(), Some(0));
}

#[test]
fn unnormalized_input_is_shifted_with_a_warning() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "shifted.txt", "ksub 1\nk=3 n=1\n0 5\n1 4\n2 6\n3 7\n");
    let output = ksub(&["dual", &file]);
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stderr).contains("warning"));
    assert!(stdout(&output).starts_with("dual -1\n"));
}
