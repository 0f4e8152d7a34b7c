//! End-to-end tests of the `urbanik` binary: exit-code contract, output
//! formats, schema validity, and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

fn urbanik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_urbanik"))
        .args(args)
        .env("URBANIK_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_sinh_reports_level_two() {
    let out = urbanik(&["classify", "--dist", "sinh", "--max-level", "4"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("achieved_level: 2"), "{text}");
    assert!(text.contains("sign witness"), "{text}");
    // Defaults are printed in the header.
    assert!(text.contains("# grid"), "{text}");
}

#[test]
fn classify_tanh_reports_mass_failure() {
    let out = urbanik(&["classify", "--dist", "tanh", "--max-level", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("achieved_level: 0"), "{text}");
    assert!(text.contains("mass failure: level 1"), "{text}");
}

#[test]
fn classify_logistic_reaches_level_one() {
    let out = urbanik(&[
        "classify",
        "--dist",
        "logistic",
        "--alpha",
        "2",
        "--max-level",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let level: i32 = text
        .lines()
        .find_map(|l| l.strip_prefix("achieved_level: "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(level >= 1, "{text}");
}

#[test]
fn classify_json_validates_against_shipped_schema() {
    let out = urbanik(&["classify", "--dist", "sinh", "--max-level", "4", "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();

    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/classify_verdict.schema.json");
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&doc)
        .map(|e| format!("{e}"))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");

    assert_eq!(doc["distribution"], "sinh");
    assert_eq!(doc["achieved_level"], 2);
    // A mass-failure case also validates.
    let out = urbanik(&["classify", "--dist", "laplace", "--max-level", "2", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(validator.iter_errors(&doc).next().is_none());
    assert!(doc["witness"].is_null());
}

#[test]
fn classify_csv_has_fixed_header() {
    let out = urbanik(&["classify", "--dist", "cosh", "--max-level", "4", "--csv"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with(
        "distribution,achieved_level,bounded_above,witness_x,witness_value,witness_left,witness_right,mass_failure_level,mass_failure_value"
    ), "{text}");
}

#[test]
fn unknown_distribution_exits_two() {
    let out = urbanik(&["classify", "--dist", "cauchy", "--max-level", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = urbanik(&["classify", "--dist", "sinh", "--max-level", "2", "--grid", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // No sampler exists for tanh; the run must fail before touching --out.
    let out = urbanik(&["sample", "--dist", "tanh", "--n", "5", "--seed", "1", "--out", "/tmp/tanh-never-written.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_cf_passes_for_sinh() {
    let out = urbanik(&[
        "verify", "--check", "cf", "--dist", "sinh", "--t", "-10:10:101", "--K", "2000",
    ]);
    assert!(out.status.success(), "{}", stdout_of(&out));
    assert!(stdout_of(&out).contains("max_dev_exponent"));
}

#[test]
fn verify_decompose_matches_spec_example() {
    let out = urbanik(&[
        "verify", "--check", "decompose", "--dist", "cosh", "--c", "0.3", "--t", "-5:5:101",
        "--tol", "1e-8",
    ]);
    assert!(out.status.success(), "{}", stdout_of(&out));
}

#[test]
fn verify_residual_triple_factors() {
    let out = urbanik(&[
        "verify", "--check", "residual", "--dist", "sinh", "--factors", "0.5,0.6,0.7",
    ]);
    assert!(out.status.success(), "{}", stdout_of(&out));
    assert!(stdout_of(&out).contains("nonnegative"));
}

#[test]
fn verify_gamma_identity() {
    let out = urbanik(&[
        "verify", "--check", "gamma-identity", "--alpha", "0.5", "--t", "-5:5:101",
    ]);
    assert!(out.status.success(), "{}", stdout_of(&out));
}

#[test]
fn verify_failure_exits_one() {
    // An absurd tolerance forces the check to fail without being an error.
    let out = urbanik(&[
        "verify", "--check", "bdcf", "--dist", "sinh", "--t", "-5:5:21", "--tol", "1e-18",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = urbanik(&[
            "sample", "--dist", "laplace", "--n", "10", "--seed", "1", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let ca = std::fs::read_to_string(&a).unwrap();
    let cb = std::fs::read_to_string(&b).unwrap();
    assert_eq!(ca, cb);
    assert!(ca.starts_with("x\n"));
    assert_eq!(ca.lines().count(), 11);
}

#[test]
fn sample_with_ecf_band_test() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sinh.csv");
    let out = urbanik(&[
        "sample", "--dist", "sinh", "--n", "20000", "--K", "500", "--seed", "42",
        "--out", path.to_str().unwrap(), "--ecf", "-8:8:161",
    ]);
    assert!(out.status.success(), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("t,ecf,target,band"), "{text}");
    assert!(text.contains("ecf_violations"), "{text}");
    assert_eq!(
        std::fs::read_to_string(&path).unwrap().lines().count(),
        20_001
    );
}

#[test]
fn sample_generalized_logistic_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gl.csv");
    let out = urbanik(&[
        "sample", "--dist", "generalized_logistic", "--alpha", "2", "--n", "1000",
        "--seed", "7", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1001);
}

#[test]
fn catalog_listing() {
    let out = urbanik(&["catalog"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    for name in urbanik_core::catalog::CATALOG_NAMES {
        assert!(text.contains(name), "{name} missing from listing");
    }
    let out = urbanik(&["catalog", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 7);
}

#[test]
fn help_lists_catalog_with_classes() {
    let out = urbanik(&["--help"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("talacko_zolotarev"), "{text}");
    assert!(text.contains("L2 \\ L3"), "{text}");
}

#[test]
fn level_report_table() {
    let out = urbanik(&[
        "classify", "--dist", "sinh", "--max-level", "3", "--level-report", "4",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("level,grid_min,grid_min_x,mass"), "{text}");
    // Level 4 must show a negative grid minimum; levels carry infinite mass.
    let row4 = text
        .lines()
        .find(|l| l.starts_with("4,"))
        .expect("level 4 row");
    assert!(row4.contains(",inf"), "{row4}");
    assert!(row4.split(',').nth(1).unwrap().starts_with('-'), "{row4}");
}
