use std::path::PathBuf;
use std::process::Command;

use morita_kit::report::{Report, Verdict};
use morita_kit::run;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn kit(args: &[&str]) -> (String, String, i32) {
    let mut argv = vec!["morita-kit".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    run(&argv)
}

#[test]
fn compare_fixture_files() {
    let (out, _, code) = kit(&["compare", &data("b5.isg"), &data("sl2.isg")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("j-poset") && out.ends_with("verdict: pass\n"));
    let (_, _, code) = kit(&["compare", "SL2", "chain3"]);
    assert_eq!(code, 2);
}

#[test]
fn witness_is_certified() {
    let (out, err, code) = kit(&["witness", &data("b5-sl2.ctx")]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("|Z|: 3"));
    assert!(out.contains("Phi after Psi: identity"));
}

#[test]
fn left_zero_table_is_rejected() {
    let (_, err, code) = kit(&["validate", &data("leftzero.isg")]);
    assert_eq!(code, 65);
    assert!(err.contains("more than one inverse"));
}

#[test]
fn expressions_evaluate() {
    let (out, _, code) = kit(&["validate", "brandt(triv,2)", "--format", "machine"]);
    assert_eq!(code, 0);
    let r = Report::from_machine(&out).unwrap();
    assert_eq!(r.sections[0].fields[0], ("size".to_string(), "5".to_string()));
    let (_, err, code) = kit(&["validate", "brandt(triv,x)"]);
    assert_eq!(code, 65);
    assert!(err.contains("column 13"));
}

#[test]
fn search_exit_codes() {
    let (out, _, code) = kit(&["me-search", &data("b5.isg"), &data("sl2.isg"), "--budget", "20"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("|X|: 3"));
    assert!(!out.contains("strategies disagree"));
    let (_, _, code) = kit(&["me-search", "B5", "chain3"]);
    assert_eq!(code, 2);
    let (out, _, code) = kit(&["me-search", "B5", "SL2", "--strategy", "direct", "--max-x", "2"]);
    assert_eq!(code, 3);
    assert!(out.contains("verdict: unknown"));
    let (_, _, code) = kit(&["me-search", "B5", "SL2", "--budget", "0"]);
    assert_eq!(code, 64);
}

#[test]
fn machine_output_is_deterministic() {
    let args = ["groupoid", "B5", "--format", "machine"];
    let (a, _, _) = kit(&args);
    let (b, _, _) = kit(&args);
    assert_eq!(a, b);
    let r = Report::from_machine(&a).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.to_machine(), a);
    let units = r.sections[0].fields.iter().find(|(k, _)| k == "arrows").unwrap();
    assert_eq!(units.1, "5");
}

#[test]
fn contexts_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b5.ctx");
    let (_, err, code) = kit(&["context-from-enlargement", "B5", "E11,0", "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (text, _, code) = kit(&["context-verify", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("identity-10"));

    let sl2 = dir.path().join("sl2.ctx");
    assert_eq!(kit(&["context-from-enlargement", "SL2", "0,1", "-o", sl2.to_str().unwrap()]).2, 0);
    let both = dir.path().join("both.ctx");
    let (_, err, code) = kit(&["compose", out.to_str().unwrap(), sl2.to_str().unwrap(), "-o", both.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(kit(&["witness", both.to_str().unwrap()]).2, 0);
    // the middle semigroups are not isomorphic
    let (_, _, code) = kit(&["compose", out.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(code, 65);
}

#[test]
fn enlargement_checks() {
    assert_eq!(kit(&["enlarge-check", "B5", "E11,0"]).2, 0);
    assert_eq!(kit(&["enlarge-check", "chain3", "0,1"]).2, 1);
    assert_eq!(kit(&["enlarge-check", "B5", "E11,E22"]).2, 65);
}

#[test]
fn usage_and_missing_inputs() {
    assert_eq!(kit(&["frobnicate"]).2, 64);
    assert_eq!(kit(&["validate"]).2, 64);
    assert_eq!(kit(&["validate", "no/such/file.isg"]).2, 66);
    let (out, _, code) = kit(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("me-search"));
}

#[test]
fn splitting_and_category_equivalence() {
    let (out, _, code) = kit(&["karoubi", "SL2"]);
    assert_eq!(code, 0);
    assert!(out.contains("arrows: 5") && out.contains("arrows: 3"));
    assert_eq!(kit(&["cat-equiv", "B5", "SL2"]).2, 0);
    assert_eq!(kit(&["cat-equiv", "SL2", "chain3"]).2, 2);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_morita-kit");
    let st = Command::new(bin).args(["validate", &data("leftzero.isg")]).output().unwrap();
    assert_eq!(st.status.code(), Some(65));
    let st = Command::new(bin).args(["tight", "B5"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(String::from_utf8(st.stdout).unwrap().contains("units: 2"));
}
