use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hydrofield")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_out(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("valid JSON")
}

fn schema(name: &str) -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(format!("{name}.schema.json"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&doc).expect("schema compiles")
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name} schema: {msgs:#?}");
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = run(args);
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn golden_outputs() {
    assert_eq!(stdout(&["table2"]), golden("table2.txt"));
    assert_eq!(stdout(&["table2", "--format", "csv"]), golden("table2.csv"));
    assert_eq!(stdout(&["state", "3", "2", "2"]), golden("state_3_2_2.txt"));
    assert_eq!(stdout(&["state", "3", "2", "-2", "--format", "json"]), golden("state_3_2_-2.json"));
    assert_eq!(stdout(&["spin2p"]), golden("spin2p.txt"));
    assert_eq!(stdout(&["expect", "7", "3", "3", "2"]), golden("expect_7_3_3_2.txt"));
}

#[test]
fn state_json_ground() {
    let v = json_out(&["state", "1", "0", "0", "--format", "json"]);
    assert_valid("state", &v);
    assert_eq!(v["keR"], "1/1");
    assert_eq!(v["potential"], "-2/1");
    assert_eq!(v["total"], "-1/1");
    assert_eq!(v["wavefunction"]["c2"], "4/1");
}

#[test]
fn state_json_validates_across_states() {
    for (n, l, m) in [(2, 1, -1), (3, 2, 2), (7, 3, 3), (12, 11, -11), (30, 0, 0)] {
        let v = json_out(&["state", &n.to_string(), &l.to_string(), &m.to_string(), "--format", "json"]);
        assert_valid("state", &v);
        assert_eq!(v["total"], format!("-1/{}", n * n));
    }
}

#[test]
fn state_text_matches_worked_example() {
    let out = stdout(&["state", "3", "2", "2", "--unit", "en"]);
    // KE_r = 3/15, KE_theta = 2/15, KE_phi = 10/15 of E_3
    for (name, value) in [("KE_r", "1/5"), ("KE_theta", "2/15"), ("KE_phi", "2/3"), ("V", "-2/1"), ("total", "-1/1")] {
        let line = out.lines().find(|l| l.split_whitespace().next() == Some(name)).unwrap();
        assert_eq!(line.split_whitespace().nth(1), Some(value), "{line}");
    }
}

#[test]
fn table2_json_and_csv_round_trip() {
    let j = json_out(&["table2", "--format", "json"]);
    assert_valid("table2", &j);
    let csv_text = stdout(&["table2", "--format", "csv"]);
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let energy_keys = &header[4..];
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.unwrap();
        let mut row = serde_json::Map::new();
        row.insert("label".into(), json!(rec[0]));
        for (i, k) in ["n", "l", "m"].iter().enumerate() {
            row.insert(k.to_string(), json!(rec[i + 1].parse::<i64>().unwrap()));
        }
        let mut approx = serde_json::Map::new();
        for (k, v) in energy_keys.iter().zip(rec.iter().skip(4)) {
            row.insert(k.clone(), json!(v));
            let (p, q) = v.split_once('/').unwrap();
            approx.insert(k.clone(), json!(p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap()));
        }
        row.insert("unit".into(), json!("E1"));
        row.insert("approx".into(), Value::Object(approx));
        rows.push(Value::Object(row));
    }
    let rebuilt = json!({ "unit": "E1", "rows": rows });
    assert_valid("table2", &rebuilt);
    assert_eq!(rebuilt["rows"].as_array().unwrap().len(), 14);
    for (a, b) in rebuilt["rows"].as_array().unwrap().iter().zip(j["rows"].as_array().unwrap()) {
        for k in ["label", "n", "l", "m", "keR", "keTheta", "kePhi", "dynamic", "totalKE", "potential", "total"] {
            assert_eq!(a[k], b[k], "{k}");
        }
    }
}

#[test]
fn table2_text_rows_and_totals() {
    let out = stdout(&["table2"]);
    let data: Vec<&str> = out.lines().skip(2).filter(|l| l.contains(',')).collect();
    assert_eq!(data.len(), 14);
    for line in data {
        let cells: Vec<&str> = line.split_whitespace().collect();
        let n: i64 = cells[0].split(',').next().unwrap().parse().unwrap();
        assert_eq!(*cells.last().unwrap(), format!("-1/{}", n * n));
    }
}

#[test]
fn spin2p_json() {
    let v = json_out(&["spin2p", "--format", "json"]);
    assert_valid("spin2p", &v);
    assert_eq!(v["agreement"], true);
    assert_eq!(v["explicitDynamicE1"], "1/6");
    assert_eq!(v["operatorDynamicE1"], "1/6");
    let f = v["fField"].as_f64().unwrap();
    assert!((7.7e14..7.8e14).contains(&f));
    let ratio = v["velocity3aOverC"].as_f64().unwrap();
    assert!((ratio - 0.0026).abs() < 5e-5);
}

#[test]
fn constants_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    // hbar and E1 scaled consistently: T scales with 1/hbar
    let hbar = 2.0 * 1.054_571_817e-34;
    let e1 = 4.0 * 2.179_872_361_103_5e-18;
    let doc = json!({
        "electronMass": 9.109_383_701_5e-31,
        "hbar": hbar,
        "bohrRadius": 5.291_772_109_03e-11,
        "lightSpeed": 299_792_458.0,
        "E1": e1,
    });
    fs::write(&path, doc.to_string()).unwrap();
    let base = json_out(&["spin2p", "--format", "json"]);
    let scaled = json_out(&["spin2p", "--format", "json", "--constants", path.to_str().unwrap()]);
    let (t0, t1) = (base["period"].as_f64().unwrap(), scaled["period"].as_f64().unwrap());
    assert!((t0 / t1 - 2.0).abs() < 1e-12);
    assert_eq!(scaled["agreement"], true);

    fs::write(&path, r#"{"electronMass": 1.0}"#).unwrap();
    assert_eq!(code(&["spin2p", "--constants", path.to_str().unwrap()]).0, 2);
    let inconsistent = json!({
        "electronMass": 9.109_383_701_5e-31,
        "hbar": hbar,
        "bohrRadius": 5.291_772_109_03e-11,
        "lightSpeed": 299_792_458.0,
        "E1": 2.179_872_361_103_5e-18,
    });
    fs::write(&path, inconsistent.to_string()).unwrap();
    assert_eq!(code(&["spin2p", "--constants", path.to_str().unwrap()]).0, 2);
    assert_eq!(code(&["spin2p", "--constants", "/nonexistent/c.json"]).0, 3);
}

#[test]
fn expect_json() {
    let v = json_out(&["expect", "2", "1", "1", "3", "--format", "json"]);
    assert_valid("expect", &v);
    assert_eq!(v["value"], "210/1");
    let v = json_out(&["expect", "1", "0", "0", "-1", "--format", "json"]);
    assert_eq!(v["value"], "1/1");
    assert_eq!(code(&["expect", "1", "0", "0", "-3"]).0, 2);
}

#[test]
fn bad_input_exit_codes() {
    let (c, err) = code(&["state", "2", "2", "0"]);
    assert_eq!(c, 2);
    assert!(err.contains("l must be < n"), "{err}");
    let (c, err) = code(&["state", "2", "1", "-2"]);
    assert_eq!(c, 2);
    assert!(err.contains("|m| must be <= l"), "{err}");
    let (c, err) = code(&["state", "0", "0", "0"]);
    assert_eq!(c, 2);
    assert!(err.contains("n must be >= 1"), "{err}");
    assert_eq!(code(&["state", "31", "0", "0"]).0, 2);
    assert_eq!(code(&["section", "1", "0", "0", "--resolution", "0"]).0, 2);
    assert_eq!(code(&["section", "1", "0", "0", "--resolution", "33"]).0, 2);
    assert_eq!(code(&["section", "1", "0", "0", "--extent", "-1"]).0, 2);
    assert_eq!(code(&["section", "1", "0", "0", "--plane", "w=0"]).0, 2);
    assert_eq!(code(&["table2", "--format", "pgm"]).0, 2);
    assert_eq!(code(&["frobnicate"]).0, 2);
    assert_eq!(code(&["verify", "--n-max", "0"]).0, 2);
}

#[test]
fn io_error_exit_code() {
    assert_eq!(code(&["table2", "--out", "/nonexistent/dir/t.txt"]).0, 3);
    assert_eq!(code(&["section", "2", "1", "1", "--resolution", "16", "--out", "/nonexistent/x.csv"]).0, 3);
}

#[test]
fn section_lobe_summaries() {
    let out = stdout(&["section", "7", "3", "3", "--plane", "z=0"]);
    assert!(out.contains("6 azimuthal × 4 radial maxima"), "{out}");
    let out = stdout(&["section", "1", "0", "0", "--plane", "z=0"]);
    assert!(out.contains("1 central maximum"), "{out}");
    let v = json_out(&["section", "3", "2", "2", "--resolution", "128", "--format", "json"]);
    assert_valid("section", &v);
    assert_eq!(v["lobes"]["azimuthal"], 4);
    assert_eq!(v["raster"], Value::Null);
}

#[test]
fn section_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("s.csv");
    let pgm_path = dir.path().join("s.pgm");
    stdout(&["section", "2", "1", "1", "--resolution", "32", "--out", csv_path.to_str().unwrap()]);
    let text = fs::read_to_string(&csv_path).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 32);
    assert!(data.iter().all(|l| l.split(',').count() == 32));
    assert!(text.contains("# state=2,1,1"));

    stdout(&["section", "2", "1", "1", "--resolution", "32", "--out", pgm_path.to_str().unwrap()]);
    let bytes = fs::read(&pgm_path).unwrap();
    assert!(bytes.starts_with(b"P5\n32 32\n255\n"));
    assert_eq!(bytes.len(), 13 + 32 * 32);

    let raw = run(&["section", "2", "1", "1", "--resolution", "16", "--format", "pgm"]);
    assert!(raw.status.success());
    assert!(raw.stdout.starts_with(b"P5\n16 16\n255\n"));
}

#[test]
fn velocity_arrows_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("arrows.json");
    stdout(&["section", "2", "1", "0", "--plane", "y=0", "--resolution", "32", "--arrow-stride", "4", "--arrows", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid("arrows", &v);
    let arrows = v["arrows"].as_array().unwrap();
    assert_eq!(arrows.len(), 64);
    assert_eq!(code(&["section", "3", "1", "0", "--arrows", path.to_str().unwrap()]).0, 2);
}

#[test]
fn verify_passes_and_validates() {
    let v = json_out(&["verify", "--n-max", "4", "--format", "json"]);
    assert_valid("verify", &v);
    assert_eq!(v["passed"], true);
    assert!(v["families"].as_array().unwrap().len() >= 8);
}

#[test]
fn verify_names_injected_fault() {
    let out = run(&["verify", "--n-max", "3", "--inject-fault", "normalization"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL  normalization"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalization"));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["table2", "--format", "json"],
        vec!["spin2p", "--format", "json"],
        vec!["section", "7", "3", "3", "--resolution", "64", "--format", "csv"],
        vec!["verify", "--n-max", "3", "--format", "json"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}
