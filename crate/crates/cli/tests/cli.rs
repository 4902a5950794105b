//! End-to-end contract tests for the binary: exit codes, diagnostics on
//! malformed input, and bit-exact matrix round-trips.

use std::path::Path;
use std::process::{Command, Output};

fn ncup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncup"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn rsup_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(
        dir.path(),
        "sigma_ok.json",
        r#"{"rows":2,"cols":2,"data":[[0.5,0.0],[0.0,0.5]]}"#,
    );
    let out = ncup(&["check", "rsup", "--sigma", &ok, "--hbar", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("principle=RSUP"));
    assert!(text.contains("holds=true"));

    let squeezed = write(
        dir.path(),
        "sigma_bad.json",
        r#"{"rows":2,"cols":2,"data":[[0.25,0.0],[0.0,0.25]]}"#,
    );
    let out = ncup(&["check", "rsup", "--sigma", &squeezed, "--hbar", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_inputs_are_code_2_with_field_names() {
    let dir = tempfile::tempdir().unwrap();

    // wrong row count
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"rows":3,"cols":2,"data":[[1.0,0.0],[0.0,1.0]]}"#,
    );
    let out = ncup(&["check", "rsup", "--sigma", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("sigma"), "diagnostic must name the field: {err}");

    // not JSON at all
    let garbled = write(dir.path(), "garbled.json", "not json");
    let out = ncup(&["check", "rsup", "--sigma", &garbled]);
    assert_eq!(out.status.code(), Some(2));

    // asymmetric covariance
    let asym = write(
        dir.path(),
        "asym.json",
        r#"{"rows":2,"cols":2,"data":[[1.0,0.5],[0.2,1.0]]}"#,
    );
    let out = ncup(&["check", "rsup", "--sigma", &asym]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("sigma"));

    // non-skew form for a generic check
    let a = write(
        dir.path(),
        "a.json",
        r#"{"rows":2,"cols":2,"data":[[1.0,0.0],[0.0,1.0]]}"#,
    );
    let notskew = write(
        dir.path(),
        "xi.json",
        r#"{"rows":2,"cols":2,"data":[[0.0,1.0],[1.0,0.0]]}"#,
    );
    let out = ncup(&["check", "form", "--a", &a, "--xi", &notskew]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("xi"));

    // missing file
    let out = ncup(&["check", "rsup", "--sigma", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));

    // invalid deformation parameters (xi >= 1)
    let w = write(
        dir.path(),
        "w.json",
        r#"{"rows":4,"cols":4,"data":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    );
    let out = ncup(&[
        "bae", "--theta", "2", "--eta", "2", "--hbar", "1", "--gain", "1", "--probe", &w, "check",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_saturating_case() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        r#"{"rows":4,"cols":4,"data":[[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#,
    );
    let xi = write(
        dir.path(),
        "xi.json",
        r#"{"rows":4,"cols":4,"data":[[0,0,1,0],[0,0,0,1],[-1,0,0,0],[0,-1,0,0]]}"#,
    );
    let out = ncup(&["spectrum", "--a", &a, "--xi", &xi]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("count=2"));
    assert!(text.contains("lambda_1=1"));
    assert!(text.contains("lambda_2=1"));
}

#[test]
fn bae_check_reports_both_forms() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(
        dir.path(),
        "w.json",
        r#"{"rows":4,"cols":4,"data":[[1.0,0.25,0.25,0.25],[0.25,1.0,-0.25,0.25],[0.25,-0.25,0.5,0.25],[0.25,0.25,0.25,0.5]]}"#,
    );
    let out = ncup(&[
        "bae", "--theta", "0.1", "--eta", "0.2", "--hbar", "1", "--gain", "2", "--probe", &w,
        "check",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("form=standard"));
    assert!(text.contains("form=deformed"));
    assert!(text.contains("lambda1="));
    assert!(text.contains("scalar_pair=1"));
    // this probe violates both, so the deformed verdict drives exit code 1
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn nqt_incompatibility_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(
        dir.path(),
        "z.json",
        r#"{"rows":4,"cols":4,"data":[[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#,
    );
    let w = write(
        dir.path(),
        "w.json",
        r#"{"rows":4,"cols":4,"data":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    );
    let out = ncup(&[
        "nqt", "--theta", "0.1", "--eta", "0", "--hbar", "1", "--object", &z, "--probe", &w,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("incompatible with noncommutative quantum mechanics"));

    // theta = 0 with generous covariances is feasible
    let out = ncup(&[
        "nqt", "--theta", "0", "--eta", "0.2", "--hbar", "1", "--object", &z, "--probe", &w,
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn written_matrices_reparse_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("witness.json");
    let out = ncup(&[
        "search", "--theta", "0.3", "--eta", "0.3", "--hbar", "1", "--gain", "1", "--samples",
        "20", "--seed", "42", "--refine-steps", "6", "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let text = std::fs::read_to_string(&out_file).unwrap();
    let v1: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reserialized = serde_json::to_string(&v1).unwrap();
    let v2: serde_json::Value = serde_json::from_str(&reserialized).unwrap();
    let data1 = v1["witness"]["data"].as_array().unwrap();
    let data2 = v2["witness"]["data"].as_array().unwrap();
    for (r1, r2) in data1.iter().zip(data2) {
        for (x1, x2) in r1.as_array().unwrap().iter().zip(r2.as_array().unwrap()) {
            let (f1, f2) = (x1.as_f64().unwrap(), x2.as_f64().unwrap());
            assert_eq!(f1.to_bits(), f2.to_bits());
        }
    }

    // the written witness is a valid probe file for other commands
    let witness_matrix = serde_json::to_string(&v1["witness"]).unwrap();
    let probe = write(dir.path(), "probe.json", &witness_matrix);
    let out = ncup(&[
        "sweep", "--theta", "0.3", "--eta", "0.3", "--hbar", "1", "--probe", &probe, "--g-from",
        "0.5", "--g-to", "2", "--steps", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn search_without_seed_is_rejected() {
    let out = ncup(&[
        "search", "--theta", "0.1", "--eta", "0.1", "--hbar", "1", "--gain", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_invalid_range_is_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(
        dir.path(),
        "w.json",
        r#"{"rows":4,"cols":4,"data":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    );
    let out = ncup(&[
        "sweep", "--theta", "0.1", "--eta", "0.1", "--probe", &w, "--g-from", "2", "--g-to",
        "0.5", "--steps", "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("g_from"));
}
