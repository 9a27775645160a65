use std::path::Path;
use std::process::Command;

use serde_json::Value;
use starq_core::io::{self, LoadedStar};
use starq_core::star::level_residuals;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn starq(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_starq"))
        .args(args)
        .env("STARQ_THREADS", "2")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit status"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn construct(dir: &Path, phi: &str, order: &str) -> std::path::PathBuf {
    let out = dir.join("star.json");
    let r = starq(&["construct", "--phi", phi, "--order", order, "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    out
}

#[test]
fn construct_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let file = construct(dir.path(), "x1*x2*x3", "3");
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(json["order"], 3);
    assert_eq!(json["kind"], "explicit");
    assert_eq!(json["levels"].as_array().unwrap().len(), 4);

    let r = starq(&["verify", file.to_str().unwrap(), "--degree", "3"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.trim_end().ends_with("PASS"));
    assert!(r.stdout.contains("associator: pass"));
}

#[test]
fn written_file_round_trips_with_zero_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let file = construct(dir.path(), "1/2*x1^2 + x2*x3", "3");
    let LoadedStar::Explicit(star) = io::load(&file).unwrap() else {
        panic!("explicit file loaded as symbolic");
    };
    assert!(level_residuals(&star).unwrap().iter().all(|r| r.is_zero()));
    assert!(star.reports.iter().all(|r| r.is_zero));
}

#[test]
fn mutated_file_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = construct(dir.path(), "x1*x2*x3", "3");
    let mut json: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let coeff = &mut json["levels"][2]["terms"][0]["coeff"][0]["coeff"];
    *coeff = Value::from(if coeff == "7/3" { "5/3" } else { "7/3" });
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&json).unwrap()).unwrap();

    let report = dir.path().join("report.json");
    let r = starq(&["verify", bad.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert!(r.stdout.trim_end().ends_with("FAIL"));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["pass"], false);
    let assoc = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "associator")
        .unwrap();
    assert_eq!(assoc["pass"], false);
    assert_eq!(assoc["witness"].as_array().unwrap().len(), 3);
    assert_eq!(assoc["inputsDigest"].as_str().unwrap().len(), 64);
}

#[test]
fn symbolic_file_verifies_after_substitution() {
    let dir = tempfile::tempdir().unwrap();
    let file = construct(dir.path(), "sym", "2");
    let path = file.to_str().unwrap();
    let r = starq(&["verify", path]);
    assert_eq!(r.code, 2, "symbolic file without --phi: {}", r.stderr);
    let r = starq(&["verify", path, "--phi", "x1^2*x3 - x2"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
}

#[test]
fn invalid_arguments_exit_with_status_two() {
    assert_eq!(starq(&["construct", "--phi", "x1*x2*x3", "--order", "0"]).code, 2);
    assert_eq!(starq(&["construct", "--phi", "x1*", "--order", "2"]).code, 2);
    assert_eq!(starq(&["construct", "--order", "3", "--jet-order", "2"]).code, 2);
    assert_eq!(starq(&["opo-check", "P(i,j) @1(i)"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"order\": 1}").unwrap();
    assert_eq!(starq(&["verify", junk.to_str().unwrap()]).code, 2);
}

#[test]
fn jacobi_reports_residuals() {
    let r = starq(&["jacobi", "--P", "x3,x1,x2"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.stdout.trim(), "residual: x1 + x2 + x3");
    let r = starq(&["jacobi", "--phi", "x1^2*x2 + x3^4"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "residual: 0"));
    let r = starq(&["jacobi", "--phi", "sym", "--psi", "sym"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "residual: 0"));
}

#[test]
fn opo_check_classifies_terms() {
    let r = starq(&["opo-check", "dP(r;i,s) dP(s;j,r) @1(i) @2(j)"]);
    assert_eq!((r.code, r.stdout.trim()), (3, "NOT OPO"));
    let r = starq(&["opo-check", "P(i,j) P(k,l) @1(k) @2(i,l) @3(j)", "--format", "json"]);
    assert_eq!(r.code, 0);
    let json: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(json["opo"], true);
}

#[test]
fn obstruction_at_third_order_vanishes() {
    let r = starq(&["obstruction", "--k", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("AR_3 = 0"), "{}", r.stdout);
    let r = starq(&["obstruction", "--k", "4", "--phi", "x1*x2*x3", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let json: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(json["isZero"], true);
}

#[test]
fn ordered_restriction_in_scaled_mode_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let reports = dir.path().join("experiment.json");
    let r = starq(&[
        "construct",
        "--mode",
        "psi-nabla-phi",
        "--psi",
        "x1",
        "--phi",
        "x3",
        "--order",
        "4",
        "--jet-order",
        "5",
        "--opo-restrict",
        "--reports",
        reports.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 3, "{}{}", r.stdout, r.stderr);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&reports).unwrap()).unwrap();
    assert_eq!(json["symbolic"]["feasible"], false);
    assert!(json["explicit"].is_object());
}

#[test]
fn export_latex_renders_every_level() {
    let dir = tempfile::tempdir().unwrap();
    let file = construct(dir.path(), "x3", "2");
    let tex = dir.path().join("star.tex");
    let r = starq(&["export-latex", file.to_str().unwrap(), "--out", tex.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let body = std::fs::read_to_string(&tex).unwrap();
    assert!(body.starts_with("\\begin{align*}"));
    for k in 0..=2 {
        assert!(body.contains(&format!("M_{{{k}}}(f_0,f_1)")));
    }
}
