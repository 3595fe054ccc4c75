use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rotrange_core::{Error, MatrixFile};
use serde_json::Value;
use tempfile::TempDir;

fn rotrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotrange")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_family(dir: &TempDir, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path_str(&path)]);
    let out = rotrange(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn check_passes_on_weighted_shift() {
    let dir = TempDir::new().unwrap();
    let file = write_family(&dir, "m.json", &["perm", "--alphas", "1,2,3"]);
    let out = rotrange(&["check", path_str(&file)]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["certificate"]["passes"], Value::Bool(true));
    let coeffs = report["extracted_p"]["poly"]["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 4);
    assert!((coeffs[1].as_f64().unwrap() + 3.5).abs() < 1e-14);
}

#[test]
fn check_fails_on_disk_counterexample() {
    let dir = TempDir::new().unwrap();
    let file = write_family(&dir, "disk.json", &["disk", "--a", "1"]);
    let report_path = dir.path().join("report.json");
    let out = rotrange(&["check", path_str(&file), "--json", path_str(&report_path)]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["certificate"]["disk_regime"], Value::Bool(true));
    assert_eq!(report["certificate"]["det"], serde_json::json!([0.0, 0.0]));
    // A³ = diag(0, 0, a³)
    assert_eq!(report["certificate"]["residual_power_identity"].as_f64(), Some(1.0));
    assert!(report["extracted_p"].is_null());
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"d\": 3, \"entries\": [").unwrap();
    let out = rotrange(&["check", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());

    fs::write(&bad, r#"{"d": 2, "entries": [[[1, 0]], [[0, 0], [1, 0]]]}"#).unwrap();
    assert_eq!(code(&rotrange(&["check", path_str(&bad)])), 2);
    assert_eq!(code(&rotrange(&["check", path_str(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&rotrange(&["bogus"])), 2);
}

#[test]
fn d4_family_files() {
    let dir = TempDir::new().unwrap();
    let file = write_family(&dir, "aplus.json", &["d4", "--variant", "a-plus", "--a", "1"]);
    let m = MatrixFile::read(&file).unwrap().to_matrix().unwrap();
    let c = (2.0f64 / 3.0).sqrt();
    assert!((m[(0, 3)].re - c).abs() < 1e-15);
    assert!((m[(1, 2)].im - c).abs() < 1e-15);
    assert_eq!(code(&rotrange(&["check", path_str(&file)])), 0);

    let file = write_family(
        &dir,
        "rt.json",
        &["d4", "--variant", "rho-theta", "--rho", "0.7", "--theta", "-0.4"],
    );
    assert_eq!(code(&rotrange(&["check", path_str(&file)])), 0);

    let out_path = dir.path().join("x.json");
    let out = rotrange(&["family", "d4", "--variant", "a-minus", "--a", "2", "--out", path_str(&out_path)]);
    assert_eq!(code(&out), 2);
    let out = rotrange(&["family", "d4", "--variant", "alphagamma-plus", "--alpha", "1"]);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&rotrange(&["family", "disk", "--a", "1.5"])), 2);
}

#[test]
fn family_files_round_trip_through_check() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 6] = [
        &["perm", "--alphas", "0.3,1.7,2.2,0.9,1.1"],
        &["d4", "--variant", "b-family", "--b", "1.5"],
        &["d4", "--variant", "a-minus", "--a", "1.3"],
        &["d4", "--variant", "alphagamma-plus", "--alpha", "2", "--gamma", "0.5"],
        &["d4", "--variant", "alphagamma-minus", "--alpha", "0.5", "--gamma", "2"],
        &["d4", "--variant", "rho-theta", "--rho", "1.2", "--theta", "0.6"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let file = write_family(&dir, &format!("f{i}.json"), args);
        let parsed = MatrixFile::read(&file).unwrap();
        let again = MatrixFile::from_matrix(&parsed.to_matrix().unwrap(), parsed.label.clone(), parsed.source.clone());
        assert_eq!(parsed, again);
        assert_eq!(code(&rotrange(&["check", path_str(&file)])), 0, "{args:?}");
    }
}

#[test]
fn resultant_command() {
    let out = rotrange(&["resultant", "--d", "3", "--alphas", "1,1,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["closed_form"].as_f64(), Some(0.0));
    let r = json(&rotrange(&["resultant", "--d", "3", "--alphas", "2,1,1"]));
    assert_eq!(r["closed_form"].as_f64(), Some(108.0));
    assert_eq!(r["flat_predicted"], Value::Bool(false));
    let r = json(&rotrange(&["resultant", "--d", "5", "--alphas", "1,1,1,1,1"]));
    assert!(r["closed_form"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(r["flat_predicted"], Value::Bool(true));
    assert_eq!(code(&rotrange(&["resultant", "--d", "6", "--alphas", "1,1,1,1,1,1"])), 2);
    assert_eq!(code(&rotrange(&["resultant", "--d", "3", "--alphas", "1,1"])), 2);
}

#[test]
fn scan_command() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("scan.csv");
    let out = rotrange(&[
        "scan", "--d", "5", "--grid", "0.5:2:4", "--exclude-diagonal", "--out", path_str(&csv_path),
    ]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "oracle", "sign", "flat"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4usize.pow(5) - 4);
    for row in &rows {
        assert!(row[5].parse::<f64>().unwrap() > 0.0, "{row:?}");
        assert_eq!(&row[6], "1");
        assert_eq!(&row[7], "false");
    }

    let out = rotrange(&["scan", "--d", "3", "--grid", "1,2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let diagonal = fields[0] == fields[1] && fields[1] == fields[2];
        assert_eq!(fields[4] == "0", diagonal, "{line}");
    }

    let out = rotrange(&["scan", "--d", "5", "--grid", ""]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
    assert_eq!(code(&rotrange(&["scan", "--d", "5", "--grid", "1:2"])), 2);
}

#[test]
fn boundary_outputs() {
    let dir = TempDir::new().unwrap();
    let tri = write_family(&dir, "tri.json", &["perm", "--alphas", "1,1,1"]);
    let svg = dir.path().join("tri.svg");
    let out = rotrange(&["boundary", path_str(&tri), "--samples", "96", "--sector-samples", "40", "--svg", path_str(&svg)]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["geometry"]["is_polygon"], Value::Bool(true));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("stroke-dasharray").count(), 6);

    let sq = write_family(&dir, "sq.json", &["perm", "--alphas", "1,2,1,2"]);
    let svg = dir.path().join("sq.svg");
    let polar = dir.path().join("sq_polar.csv");
    let out = rotrange(&[
        "boundary", path_str(&sq), "--samples", "128", "--sector-samples", "40",
        "--svg", path_str(&svg), "--polar", path_str(&polar),
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["flat_parts"].as_array().unwrap().len(), 4);
    assert_eq!(fs::read_to_string(&svg).unwrap().matches("#c0392b").count(), 4);
    let polar_text = fs::read_to_string(&polar).unwrap();
    assert_eq!(polar_text.lines().next(), Some("psi,r"));
    assert_eq!(polar_text.lines().count(), 129);

    let out = rotrange(&["boundary", path_str(&sq), "--samples", "16"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn boundary_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let file = write_family(&dir, "a.json", &["d4", "--variant", "a-plus", "--a", "1"]);
    let mut outputs = Vec::new();
    for run in 0..2 {
        let csv_path = dir.path().join(format!("b{run}.csv"));
        let json_path = dir.path().join(format!("b{run}.json"));
        let out = rotrange(&[
            "boundary", path_str(&file), "--samples", "200", "--sector-samples", "30",
            "--csv", path_str(&csv_path), "--json", path_str(&json_path),
        ]);
        assert_eq!(code(&out), 0);
        outputs.push((fs::read(&csv_path).unwrap(), fs::read(&json_path).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv_text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(csv_text.lines().next(), Some("theta,wM,dwM,re_zeta,im_zeta,flag"));
}

#[test]
fn exit_code_mapping() {
    use rotrange_cli::exit_code;
    assert_eq!(exit_code(&Error::NoConvergence { sweeps: 64, off_norm: 1.0 }), 3);
    assert_eq!(exit_code(&Error::NotHermitian { asymmetry: 1.0, allowed: 0.0 }), 3);
    assert_eq!(exit_code(&Error::UnsupportedDimension(9)), 2);
}
