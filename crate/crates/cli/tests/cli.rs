use serde_json::Value;
use std::process::{Command, Output};

fn quadplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadplane")).args(args).output().expect("binary runs")
}

fn verify_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["verify"];
    all.extend_from_slice(args);
    let out = quadplane(&all);
    let code = out.status.code().unwrap();
    (code, serde_json::from_slice(&out.stdout).unwrap_or(Value::Null))
}

#[test]
fn dual_census() {
    let (code, r) = verify_json(&["--field", "2", "--kind", "dual", "--checks", "haxioms,census"]);
    assert_eq!(code, 0);
    assert_eq!(r["census"]["n"], 28);
    assert_eq!(r["census"]["g_x"], 3);
    assert_eq!(r["census"]["n_x"], 6);
    assert_eq!(r["holds"], true);
    for c in r["checks"].as_array().unwrap() {
        for a in c["reports"].as_array().unwrap() {
            assert!(a["paper_anchor"].as_str().is_some_and(|s| !s.is_empty()));
        }
    }
}

#[test]
fn split_equivalence_reports_projectivities() {
    let (code, r) = verify_json(&["--field", "2", "--kind", "split", "--checks", "saxioms,equivalence"]);
    assert_eq!(code, 0);
    let eq = r["checks"].as_array().unwrap().iter().find(|c| c["check"] == "equivalence").unwrap();
    let m = &eq["details"]["equivalence:matrices~reduction"]["matrix"];
    assert_eq!(m.as_array().unwrap().len(), 9);
    assert!(m.as_array().unwrap().iter().all(|row| row.as_array().unwrap().len() == 9));
    let segre = &r["checks"][0]["details"]["segre"]["matrix"];
    assert_eq!(segre.as_array().unwrap().len(), 9);
}

#[test]
fn kind_check_mismatch_is_a_config_error() {
    let out = quadplane(&["verify", "--field", "2", "--kind", "dual", "--checks", "saxioms"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("split"));
    for bad in [
        vec!["verify", "--field", "6", "--kind", "dual"],
        vec!["verify", "--field", "2", "--kind", "quaternion"],
        vec!["verify", "--field", "2", "--kind", "dual", "--t", "0", "--n", "0"],
        vec!["verify", "--field", "2^2", "--modulus", "1,0,1", "--kind", "dual"],
        vec!["verify", "--field", "2", "--kind", "dual", "--checks", "everything"],
        vec!["export", "--field", "2", "--kind", "dual"],
    ] {
        assert_eq!(quadplane(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn failed_check_exits_one_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = quadplane(&["verify", "--field", "2", "--kind", "dual", "--checks", "uniqueness", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(r["holds"], false);
    assert_eq!(r["checks"][0]["reports"][0]["violations"], 112);
}

#[test]
fn reports_are_deterministic_apart_from_timings() {
    let args = ["--field", "3", "--kind", "extension", "--checks", "algebra,plane,vaxioms,equivalence", "--threads", "2"];
    let (_, mut a) = verify_json(&args);
    let (_, mut b) = verify_json(&args);
    assert_eq!(a["digest"].as_str().unwrap().len(), 64);
    a.as_object_mut().unwrap().remove("timings");
    b.as_object_mut().unwrap().remove("timings");
    assert_eq!(a, b);
    let (_, c) = verify_json(&["--field", "3", "--kind", "extension", "--checks", "algebra,plane"]);
    assert_ne!(a["digest"], c["digest"]);
}

#[test]
fn explicit_parameters_and_text_format() {
    let out = quadplane(&["verify", "--field", "3", "--t", "0", "--n", "1", "--checks", "algebra,plane", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("extension algebra"));
    assert!(text.contains("overall: ok"));
}

fn grid_sums(path: &std::path::Path) -> (usize, Vec<usize>, Vec<usize>) {
    let text = std::fs::read_to_string(path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    let row_sums = rows.iter().map(|r| r.bytes().filter(|&b| b == b'1').count()).collect();
    let cols = rows[0].len();
    let col_sums = (0..cols).map(|c| rows.iter().filter(|r| r.as_bytes()[c] == b'1').count()).collect();
    (rows.len(), row_sums, col_sums)
}

#[test]
fn export_writes_models_and_incidence() {
    let dir = tempfile::tempdir().unwrap();
    let out = quadplane(&["export", "--field", "2", "--kind", "dual", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (n, rows, cols) = grid_sums(&dir.path().join("incidence.txt"));
    assert_eq!(n, 28);
    assert!(rows.iter().all(|&s| s == 6));
    assert!(cols.iter().all(|&s| s == 6));
    let model: Value = serde_json::from_slice(&std::fs::read(dir.path().join("model-matrices.json")).unwrap()).unwrap();
    assert_eq!(model["X"].as_array().unwrap().len(), 28);
    assert_eq!(model["ambient_dim"], 8);
    let plane: Value = serde_json::from_slice(&std::fs::read(dir.path().join("plane.json")).unwrap()).unwrap();
    assert_eq!(plane["points"].as_array().unwrap().len(), 28);

    let ext = tempfile::tempdir().unwrap();
    let out = quadplane(&["export", "--field", "2", "--kind", "extension", "--construction", "matrices", "--out", ext.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (n, rows, _) = grid_sums(&ext.path().join("incidence.txt"));
    assert_eq!(n, 21);
    assert!(rows.iter().all(|&s| s == 5));
    assert!(!ext.path().join("model-reduction.json").exists());
}

#[test]
fn export_is_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(quadplane(&["export", "--field", "3", "--kind", "split", "--out", d.path().to_str().unwrap()]).status.success());
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for name in names {
        assert_eq!(std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap(), "{name:?}");
    }
}
