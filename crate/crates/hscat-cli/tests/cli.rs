//! CLI-level behavior: file round trips, exit codes and input validation.

use std::path::PathBuf;
use std::process::Command;

use hscat_cli::formats::{spectrum_from_csv, subspace_from_file, SubspaceFile};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hscat")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("spawn");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("hscat-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

/// Every emitted subspace file parses back to an identical canonical object,
/// and re-serializing yields identical bytes.
#[test]
fn subspace_file_round_trip_is_canonical() {
    let d = dir("roundtrip");
    let f = d.join("g.json");
    let (code, stdout, _) = run(&[
        "construct", "gabidulin", "--p", "3", "--e", "1", "--n", "4", "--r", "2",
        "--out", f.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let parsed: SubspaceFile = serde_json::from_str(&stdout).unwrap();
    let u = subspace_from_file(&parsed, 1 << 20).unwrap();
    assert_eq!(u.dim(), 4);
    let re = hscat_cli::formats::subspace_to_file(&u, parsed.provenance.clone());
    assert_eq!(
        serde_json::to_string_pretty(&re).unwrap(),
        serde_json::to_string_pretty(&parsed).unwrap()
    );
}

#[test]
fn spectrum_csv_round_trip() {
    let d = dir("csv");
    let f = d.join("g.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", f.to_str().unwrap()]);
    let (code, stdout, _) = run(&["spectrum", "--file", f.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 0);
    let spec = spectrum_from_csv(&stdout).unwrap();
    assert_eq!(spec.r, 2);
    assert_eq!(spec.n, 3);
    assert_eq!(spec.q, 2);
    assert_eq!(spec.k, 3);
    assert_eq!(spec.total(), num_bigint::BigUint::from(9u32));
}

#[test]
fn exit_code_1_on_input_errors() {
    let d = dir("exit1");
    // composite p
    let (code, _, err) = run(&["construct", "gabidulin", "--p", "4", "--e", "1", "--n", "3",
        "--r", "2", "--out", d.join("x.json").to_str().unwrap()]);
    assert_eq!(code, 1, "stderr: {err}");
    // n < r
    let (code, _, _) = run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "2",
        "--r", "3", "--out", d.join("y.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    // missing file
    let (code, _, _) = run(&["check", "--file", d.join("missing.json").to_str().unwrap(),
        "--h", "1"]);
    assert_eq!(code, 1);
    // bad h
    let f = d.join("g.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", f.to_str().unwrap()]);
    let (code, _, _) = run(&["check", "--file", f.to_str().unwrap(), "--h", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn exit_code_2_on_cap_exceeded() {
    let d = dir("exit2");
    let f = d.join("g.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "5", "--r", "2",
        "--out", f.to_str().unwrap()]);
    let (code, _, err) = run(&["check", "--file", f.to_str().unwrap(), "--h", "1",
        "--cap", "10"]);
    assert_eq!(code, 2, "stderr: {err}");
    // field too large at construction
    let (code, _, err) = run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "25",
        "--r", "2", "--field-cap", "1024", "--out", d.join("big.json").to_str().unwrap()]);
    assert_eq!(code, 2, "stderr: {err}");
}

#[test]
fn exit_code_3_on_verification_failure() {
    let d = dir("exit3");
    let f = d.join("g.json");
    run(&["construct", "subgeometry", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", f.to_str().unwrap()]);
    // single basis row (1, 0): too small to violate any intersection, but it
    // does not span the ambient space, so the check fails with that reason
    let text = std::fs::read_to_string(&f).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["basis"] = serde_json::json!([
        [[[1],[0],[0]], [[0],[0],[0]]]
    ]);
    let bad = d.join("line.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let (code, stdout, _) = run(&["check", "--file", bad.to_str().unwrap(), "--h", "1"]);
    assert_eq!(code, 3);
    let verdict: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(verdict["scattered"], serde_json::json!(false));
    assert_eq!(verdict["reason"], serde_json::json!("not-spanning"));
}

#[test]
fn tampered_moduli_are_rejected() {
    let d = dir("moduli");
    let f = d.join("g.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", f.to_str().unwrap()]);
    let text = std::fs::read_to_string(&f).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // x^3 + x^2 + 1 is irreducible but not the canonical choice
    v["fqn_modulus"] = serde_json::json!([[1], [0], [1], [1]]);
    std::fs::write(&f, serde_json::to_string(&v).unwrap()).unwrap();
    let (code, _, err) = run(&["check", "--file", f.to_str().unwrap(), "--h", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("moduli"), "stderr: {err}");
}

#[test]
fn witness_is_reported_in_verdict_json() {
    let d = dir("witness");
    // build a dim-4 subspace of F_8^2 (necessarily not 1-scattered)
    let f = d.join("g.json");
    run(&["construct", "subgeometry", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", f.to_str().unwrap()]);
    let text = std::fs::read_to_string(&f).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["basis"] = serde_json::json!([
        [[[1],[0],[0]], [[0],[0],[0]]],
        [[[0],[1],[0]], [[0],[0],[0]]],
        [[[0],[0],[1]], [[0],[0],[0]]],
        [[[0],[0],[0]], [[1],[0],[0]]]
    ]);
    let bad = d.join("fat.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let (code, stdout, _) = run(&["check", "--file", bad.to_str().unwrap(), "--h", "1"]);
    assert_eq!(code, 3);
    let verdict: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(verdict["reason"], serde_json::json!("witness"));
    let w = &verdict["witness"];
    assert!(w["intersection_dim"].as_u64().unwrap() > 1);
    assert!(w["rows"].as_array().unwrap().len() == 1);
}

#[test]
fn identities_spectrum_requires_h() {
    let d = dir("idh");
    let f = d.join("g.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", f.to_str().unwrap()]);
    let csv = d.join("g.csv");
    run(&["spectrum", "--file", f.to_str().unwrap(), "--format", "csv",
        "--out", csv.to_str().unwrap()]);
    let (code, _, err) = run(&["identities", "--spectrum", csv.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("--h"), "stderr: {err}");
}

#[test]
fn e2_tower_through_the_cli() {
    let d = dir("e2");
    let f = d.join("g.json");
    let (code, stdout, _) = run(&["construct", "gabidulin", "--p", "2", "--e", "2", "--n", "2",
        "--r", "2", "--out", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["e"], serde_json::json!(2));
    assert_eq!(v["fq_modulus"], serde_json::json!([1, 1, 1])); // x^2 + x + 1
    let (code, verdict) = {
        let (c, s, _) = run(&["check", "--file", f.to_str().unwrap(), "--h", "1"]);
        (c, serde_json::from_str::<serde_json::Value>(&s).unwrap())
    };
    assert_eq!(code, 0);
    assert_eq!(verdict["scattered"], serde_json::json!(true));
    assert_eq!(verdict["tower"]["q"], serde_json::json!(4));
    assert_eq!(verdict["enumerated_subspaces"], serde_json::json!("17"));
}
