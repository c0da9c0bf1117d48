use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn gtop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtop"))
        .args(args)
        .output()
        .expect("gtop runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gt_check_exit_codes() {
    let ok = gtop(&["gt-check", &fixture("trivial.txt")]);
    assert_eq!(ok.status.code(), Some(0));
    let refuted = gtop(&["gt-check", &fixture("candidates.txt")]);
    assert_eq!(refuted.status.code(), Some(1));
    assert!(stdout(&refuted).contains("lambda=1 f=1 2 -1 -2 | relation1: pass | relation2: FAIL"));
    let bad = gtop(&["gt-check", &fixture("words.txt")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 1, column 1"));
}

#[test]
fn gt_mul_and_act() {
    let out = gtop(&["gt-mul", &fixture("trivial.txt")]);
    assert_eq!(stdout(&out), "lambda=-1 f=\n");
    let out = gtop(&["gt-mul", &fixture("involution.txt")]);
    assert_eq!(stdout(&out), "lambda=1 f=\n");
    let out = gtop(&["gt-act", &fixture("candidates.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let out = gtop(&["gt-act", &fixture("trivial.txt"), "--target", "B3 1"]);
    assert_eq!(stdout(&out), "lambda=1 f= | B3 1\nlambda=-1 f= | B3 -1\n");
    let out = gtop(&["gt-act", &fixture("trivial.txt"), "--target", "1 2"]);
    assert_eq!(stdout(&out), "lambda=1 f= | 1 2\nlambda=-1 f= | -1 -2\n");
}

#[test]
fn phi_inverse_rejection_is_a_verdict() {
    let out = gtop(&["phi-roundtrip", "3", "--target", "paub"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("level 1 of PaUB is not a point"));
}

#[test]
fn id_and_mirror_are_not_homotopic() {
    let out = gtop(&["homotopy-validate", "id-mirror", "--arity", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("decision: not homotopic"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(gtop(&["operad-audit", "A", "1"]).status.code(), Some(2));
    assert_eq!(gtop(&["gt-check", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(gtop(&["certify", &fixture("trivial.txt"), "--catalog", "huge"]).status.code(), Some(2));
    assert_eq!(gtop(&["cohomology", &fixture("words.txt")]).status.code(), Some(2));
    assert_eq!(gtop(&["cohomology", &fixture("z2.groupoid"), "--coefficients", "S7"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("gtop-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let args = ["cohomology", &fixture("z2.groupoid"), "--catalog", "small"];
    let printed = stdout(&gtop(&args));
    let mut with_out = args.to_vec();
    let path_str = path.to_string_lossy().into_owned();
    with_out.extend(["--out", &path_str]);
    let out = gtop(&with_out);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn set_operad_audits_pass() {
    for op in ["A", "UM"] {
        let out = gtop(&["operad-audit", op, "4"]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    }
    let out = gtop(&["operad-audit", "BM", "3", "--star-budget", "1"]);
    assert_eq!(out.status.code(), Some(0));
}
