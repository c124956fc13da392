use std::io::Write;
use std::process::{Command, Output, Stdio};

use conenorm::RunReport;

fn conenorm(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_conenorm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn example_output_feeds_run() {
    let ex = conenorm(&["example", "cross", "3"], "");
    assert!(ex.status.success());
    let text = String::from_utf8(ex.stdout).unwrap();
    let out = conenorm(&["run", "-", "--volume", "--basis", "--format", "json"], &text);
    assert!(out.status.success());
    let r = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.volume.unwrap().to_string(), "8");
    assert_eq!(r.hilbert_basis.unwrap().len(), 7);
}

#[test]
fn default_tasks_and_text_output() {
    let out = conenorm(&["run", "-"], "2 2\n1 0\n1 3\ngens\n");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("support hyperplanes 2"), "{text}");
    assert!(text.contains("hilbert basis elements 4"), "{text}");
}

#[test]
fn keep_triangulation_writes_keys() {
    let dir = std::env::temp_dir().join(format!("conenorm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("tri.txt");
    let out = conenorm(
        &["run", "-", "--keep-triangulation", file.to_str().unwrap()],
        "3 2\n1 0\n1 1\n0 1\ngens\n",
    );
    assert!(out.status.success());
    let lines = std::fs::read_to_string(&file).unwrap();
    assert_eq!(lines.lines().collect::<Vec<_>>(), vec!["0 1 1", "1 2 1"]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    let missing = conenorm(&["run", "/nonexistent/cone.in"], "");
    assert_eq!(missing.status.code(), Some(1));

    let parse = conenorm(&["run", "-"], "2 2\n1 0\n0 x\ngens\n");
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 3"));

    let line = conenorm(&["run", "-"], "2 1\n1\n-1\ngens\n");
    assert_eq!(line.status.code(), Some(3));

    let partial = conenorm(&["run", "-", "--series", "--partial"], "1 1\n1\ngens\n");
    assert_eq!(partial.status.code(), Some(3));
}
