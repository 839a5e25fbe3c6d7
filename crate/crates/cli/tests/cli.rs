use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn hyperq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperq")).args(args).output().expect("spawn hyperq")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const PROGRAM: &str = "\
x = (2*n + 3)/(n + 1)
A = residue(6; {1, 4}) | finite{2}
st x
classify x
decide A
monotone x
ramsey sum(3; {0})
select block(5)
";

#[test]
fn st_answer_lands_near_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "x = (2*n+3)/(n+1); st x\n");
    let o = hyperq(&["run", &f, "--digits", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o).lines().find(|l| l.starts_with("st x:")).unwrap().to_string();
    assert_eq!(line, "st x: 2 ~ 2.000000");
}

#[test]
fn residue_policy_is_reported() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "decide residue(2;{0})\n");
    let o = hyperq(&["run", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("decide residue(2; {0}): Big (residue-policy)"));
}

#[test]
fn report_starts_with_session_header() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "seed 9\nclassify n\n");
    let o = hyperq(&["run", &f, "--horizon", "5000"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("seed: 9"));
    assert_eq!(lines.next(), Some("horizon: 5000"));
    assert_eq!(lines.next(), Some("classify n: InfinitelyLarge"));
}

#[test]
fn seed_flag_overrides_directive() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "seed 9\nclassify n\n");
    let o = hyperq(&["run", &f, "--seed", "4"]);
    assert!(stdout(&o).starts_with("seed: 4\n"));
}

#[test]
fn patched_denominator_warns_but_succeeds() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "z = 1/(n-3)\nclassify z\n");
    let o = hyperq(&["run", &f]);
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert!(err.contains("warning[W301]"), "{err}");
    assert!(err.contains(":1:7:"), "{err}");
}

#[test]
fn journal_then_replay_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", PROGRAM);
    let j1 = dir.path().join("j1.txt");
    let j2 = dir.path().join("j2.txt");
    let j3 = dir.path().join("j3.txt");
    let run = |j: &Path, extra: &[&str]| {
        let mut args = vec!["run", &f, "--seed", "17", "--journal", j.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = hyperq(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (stdout(&o), std::fs::read(j).unwrap())
    };
    let a = run(&j1, &[]);
    let b = run(&j2, &[]);
    let c = run(&j3, &["--replay", j1.to_str().unwrap()]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(!a.1.is_empty());
}

#[test]
fn replay_under_other_seed_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", PROGRAM);
    let j = dir.path().join("j.txt");
    let o = hyperq(&["run", &f, "--seed", "1", "--journal", j.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = hyperq(&["run", &f, "--seed", "2", "--replay", j.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E203"), "{}", stderr(&o));
}

#[test]
fn syntax_error_exits_one_with_span() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.hq", "x = 1/(n+1)\ny = (n + \n");
    let o = hyperq(&["run", &f]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.hq:2:"), "{err}");
    assert!(err.contains("E102"), "{err}");
}

#[test]
fn decimal_literal_is_a_lex_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.hq", "x = 0.5 * n\n");
    let o = hyperq(&["check", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.hq:1:5: error[E101]"), "{}", stderr(&o));
}

#[test]
fn check_reports_unbound_names_without_running() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "classify y\n");
    let o = hyperq(&["check", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E103"));
    assert!(stdout(&o).is_empty());

    let g = write(&dir, "q.hq", PROGRAM);
    let o = hyperq(&["check", &g]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn missing_file_is_reported() {
    let o = hyperq(&["run", "/nonexistent/p.hq"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("reading /nonexistent/p.hq"));
}

#[test]
fn prefix_flag_controls_witness_length() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "select block(3)\n");
    let o = hyperq(&["run", &f, "--prefix", "4"]);
    let line = stdout(&o).lines().last().unwrap().to_string();
    let (_, rest) = line.split_once(": ").unwrap();
    assert_eq!(rest.split_whitespace().count(), 4, "{line}");
}

#[test]
fn joint_modulus_overflow_exits_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.hq", "decide residue(16777216; {0})\ndecide residue(16777213; {1})\nclassify n\n");
    let o = hyperq(&["run", &f]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("E202"));
    // execution stops at the failing query
    assert_eq!(stdout(&o).lines().count(), 3);
}
