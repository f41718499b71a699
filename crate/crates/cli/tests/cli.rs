use std::path::Path;
use std::process::{Command, Output};

use ehcheck_core::families::type2_constants;
use serde_json::Value;

fn ehcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehcheck"))
        .args(args)
        .env_remove("EHCHECK_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn construct_type2_reference_member() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = ehcheck(&["construct", "--family", "type2", "--B", "1", "--n", "3", "--C", "0", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = read_json(&path);
    assert_eq!(v["schema_version"], 1);
    let q = &v["results"][0]["quantities"];
    assert!((q["r0"]["value"].as_f64().unwrap() - 1.118033989).abs() < 1e-9);
    assert_eq!(q["A"]["value"].as_f64().unwrap(), -1.5625);
    assert!(q["r0"]["provenance"]["formula"].as_str().unwrap().contains("cosine"));
    assert!(q["r0"]["tolerance"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_type1_passes() {
    let out = ehcheck(&["verify", "--family", "type1", "--B", "1", "--n", "3", "--C", "0"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["results"][0]["checks"].as_array().unwrap();
    for name in ["scalar-curvature", "ricci-table", "bolt-smoothness"] {
        let c = checks.iter().find(|c| c["name"] == name).unwrap();
        assert_eq!(c["pass"], true, "{name}");
    }
}

#[test]
fn gap_member_exits_one_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.json");
    let out = ehcheck(&["construct", "--family", "type2", "--B", "1", "--n", "3", "--C", "1", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = read_json(&path);
    assert_eq!(v["results"][0]["admissibility"], "inadmissible-C");
    assert_eq!(v["summary"]["failed"], 1);
}

#[test]
fn scan_flags_exactly_the_gap() {
    let k = type2_constants(1.0, 3, 0.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let range = format!("{}:{}:81", k.c1 - 1.0, k.c4 + 1.0);
    ehcheck(&["scan", "--family", "type2", "--n", "3", "--C", &range, "--csv", path.to_str().unwrap()]);
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 81);
    let mut gap = 0;
    for row in &rows {
        let c: f64 = row[2].parse().unwrap();
        let flagged = &row[3] == "inadmissible-C";
        assert_eq!(flagged, c > k.c2 && c <= k.c4, "C = {c}");
        gap += usize::from(flagged);
    }
    assert!(gap > 0);
}

#[test]
fn scan_header_is_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    ehcheck(&["scan", "--family", "type1", "--C", "0", "--csv", path.to_str().unwrap()]);
    let mut r = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        r.headers().unwrap(),
        vec!["B", "n", "C", "admissibility", "r0", "A", "scalar_residual", "h_residual", "E_raw", "kappa", "E_paper", "status"]
    );
}

#[test]
fn n_sweep_energy_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n.csv");
    let out = ehcheck(&["scan", "--family", "type2", "--B", "4", "--n", "3:8", "--C", "0", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let n: f64 = row[1].parse().unwrap();
        let b = 4.0f64;
        let expected = -(n * n - 4.0).powi(2) / (16.0 * b * b) * b.sqrt();
        let e_paper: f64 = row[10].parse().unwrap();
        assert!((e_paper - expected).abs() <= 1e-12 * expected.abs(), "n = {n}");
        let kappa: f64 = row[9].parse().unwrap();
        assert!((kappa - 0.25).abs() < 1e-8);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&ehcheck(&["scan", "--family", "type2", "--C", "0:1:0"])), 2);
    assert_eq!(code(&ehcheck(&["scan", "--family", "type2", "--n", "8:3"])), 2);
    assert_eq!(code(&ehcheck(&["scan", "--family", "type2", "--C", "-1:0:20", "--max-specs", "10"])), 2);
    assert_eq!(code(&ehcheck(&["verify", "--family", "type7"])), 2);
    assert_eq!(code(&ehcheck(&["verify", "--family", "type1", "--tol-residual", "-1"])), 2);
    assert_eq!(code(&ehcheck(&["verify", "--family", "type1", "--schema-version", "2"])), 2);
    assert_eq!(code(&ehcheck(&["einstein-check", "--family", "hyperbolic"])), 2);
}

#[test]
fn output_does_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let k = type2_constants(1.0, 3, 0.0);
    let range = format!("{}:{}:9", k.c1 - 1.0, k.c2);
    let mut csvs = Vec::new();
    let mut jsons = Vec::new();
    for workers in ["1", "3"] {
        let c = dir.path().join(format!("s{workers}.csv"));
        let j = dir.path().join(format!("s{workers}.json"));
        let out = ehcheck(&[
            "scan", "--family", "type2", "--B", "0.5,1", "--n", "3:4", "--C", &range, "--workers", workers,
            "--csv", c.to_str().unwrap(), "--json", j.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        csvs.push(std::fs::read(&c).unwrap());
        let mut v = read_json(&j);
        v.as_object_mut().unwrap().remove("runtime");
        jsons.push(v);
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(jsons[0], jsons[1]);
}

#[test]
fn csv_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (c, j) = (dir.path().join("v.csv"), dir.path().join("v.json"));
    ehcheck(&["scan", "--family", "type1", "--B", "0.3", "--n", "5", "--C", "-2:0:3", "--csv", c.to_str().unwrap(), "--json", j.to_str().unwrap()]);
    let v = read_json(&j);
    for (row, json) in csv_rows(&c).iter().zip(v["rows"].as_array().unwrap()) {
        assert_eq!(row[4].parse::<f64>().unwrap(), json["r0"].as_f64().unwrap());
        assert_eq!(row[5].parse::<f64>().unwrap(), json["A"].as_f64().unwrap());
    }
}

#[test]
fn einstein_check_outcomes() {
    // EH-AdS lapse is vacuum; a type-I lapse never is
    let out = ehcheck(&["einstein-check", "--family", "type2", "--C", "0", "--c1", "1", "--c2", "0"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"][0]["detail"], "branch: hyperbolic-lapse");
    assert_eq!(v["results"][0]["checks"][1]["name"], "vacuum-extension");
    let out = ehcheck(&["einstein-check", "--family", "type2", "--C", "-1", "--c1", "1", "--c2", "0.2"]);
    assert_eq!(code(&out), 0);
    let out = ehcheck(&["einstein-check", "--family", "type1", "--C", "-0.5", "--c1", "1", "--c2", "0.5"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"][0]["checks"][1]["name"], "no-vacuum-extension");
}

#[test]
fn energy_rejects_non_hyperbolic_family() {
    let out = ehcheck(&["energy", "--family", "type1"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"][0]["status"], "not-ALH");
}
