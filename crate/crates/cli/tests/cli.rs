use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qell"))
        .args(args)
        .env_remove("QELL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

#[test]
fn z2_point_ranks() {
    let o = qell(&["qell", "--group", "builtin:Z2", "--space", "pt"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["total"], 4);
    assert_eq!(r["degrees"], serde_json::json!(["0/1", "0/1", "0/1", "1/2"]));
    assert_eq!(r["status"], "ok");
}

#[test]
fn sl2_verification_on_twisted_z4() {
    let o = qell(&["verify", "sl2", "--group", "builtin:Z4", "--cocycle", "cyclic:4:1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c["passed"] == true && c["cases"].as_u64().unwrap() > 0));
}

#[test]
fn bad_cocycle_exits_one_with_quadruple() {
    let o = qell(&["cocycle-check", "--group", "builtin:Z2", "--cocycle", r#"explicit:[[[0,1,1],"1/2"]]"#]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["status"], "check-failed");
    assert_eq!(r["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn schema_errors_exit_two_with_a_path() {
    let cases: &[&[&str]] = &[
        &["cocycle-check", "--group", "builtin:Z2", "--cocycle", r#"explicit:[[[1,1,1],"2/4"]]"#],
        &["qell", "--group", r#"{"kind":"builtin","name":"Z2","extra":0}"#],
        &["qell", "--group", "builtin:Z2", "--space", r#"{"size":2,"action":[[0,1],[1,2]]}"#],
        &["qell", "--group", r#"{"kind":"table","table":[[0,1],[0,1]]}"#],
        &["qell", "--group", "builtin:Z3", "--cocycle", "cyclic:4:1"],
        &["qell", "--space", "pt"],
        &["group-info", "--group", "/nonexistent/group.json"],
    ];
    for args in cases {
        let o = qell(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let r = report(&o);
        assert_eq!(r["status"], "input-error");
        assert!(r["error"]["message"].is_string());
    }
    let r = report(&qell(cases[2]));
    assert_eq!(r["error"]["path"], "$.action[1][1]");
    let r = report(&qell(cases[0]));
    assert_eq!(r["error"]["path"], "$.entries[0][1]");
}

#[test]
fn twisted_inputs_must_be_cocycles() {
    let o = qell(&["qell", "--group", "builtin:Z2", "--cocycle", r#"explicit:[[[0,1,1],"1/2"]]"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout_and_is_skipped_on_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/report.json");
    let o = qell(&["devoto-rank", "--group", "builtin:S3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), o.stdout);
    assert_eq!(report(&o)["total"], 8);

    let bad = dir.path().join("bad.json");
    let o = qell(&["devoto-rank", "--group", "builtin:Nope", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!bad.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qell"))
        .args(["group-info", "--group", "builtin:Q8"])
        .env("QELL_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(dir.path().join("group-info.json")).unwrap(), o.stdout);
}

#[test]
fn inputs_can_come_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    fs::write(&g, r#"{"kind":"perms","degree":3,"gens":[[1,2,0],[1,0,2]]}"#).unwrap();
    let o = qell(&["group-info", "--group", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["order"], 6);
}

/// The embedded inputs of a report reproduce it byte for byte.
#[test]
fn chern_reports_round_trip() {
    let first = qell(&["chern", "--group", "builtin:Z4", "--cocycle", "cyclic:4:1", "--space", "regular"]);
    assert_eq!(first.status.code(), Some(0));
    let r = report(&first);
    assert_eq!(r["checks"]["kernel"], true);
    assert_eq!(r["checks"]["willerton"], true);
    assert_eq!(r["checks"]["sl2"]["S"], true);
    assert_eq!(r["checks"]["sl2"]["T"], true);
    let input = &r["input"];
    let s = |k: &str| input[k].to_string();
    let (g, c, x, cl) = (s("group"), s("cocycle"), s("space"), s("class"));
    let again = qell(&["chern", "--group", &g, "--cocycle", &c, "--space", &x, "--class", &cl]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn every_subcommand_is_deterministic() {
    let runs: &[&[&str]] = &[
        &["group-info", "--group", "builtin:D4"],
        &["cocycle-check", "--group", "builtin:Z4", "--cocycle", "cyclic:4:3"],
        &["transgress", "--group", "builtin:Z2xZ2", "--cocycle", r#"coboundary:[[[1,2],"1/2"]]"#],
        &["extension", "--group", "builtin:Z2", "--cocycle", "cyclic:2:1"],
        &["qell", "--group", "builtin:S3", "--space", "regular"],
        &["devoto-rank", "--group", "builtin:Z2", "--cocycle", "cyclic:2:1"],
        &["chern", "--group", "builtin:S3"],
        &["verify", "ell", "--seed", "4"],
    ];
    for args in runs {
        let a = qell(args);
        let b = qell(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(report(&a)["input"].is_object());
    }
}

#[test]
fn extension_reports_the_sharp_lift_order() {
    let o = qell(&["extension", "--group", "builtin:Z2", "--cocycle", "cyclic:2:1", "--element", "1"]);
    let r = report(&o);
    let e = &r["extensions"][0];
    assert_eq!(e["lift_order"], 4);
    assert_eq!(e["extension_order"], 4);
    assert_eq!(e["projective_irreps"].as_array().unwrap().len(), 2);
}
