use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn moduli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moduli"))
        .args(args)
        .env_remove("MODULI_DATA_DIR")
        .env_remove("MODULI_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

#[test]
fn forms_of_minus_23() {
    let o = moduli(&["forms", "-d", "-23"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\t1\t6\n2\t-1\t3\n2\t1\t3\n");
}

#[test]
fn class_polynomial_of_minus_15() {
    let o = moduli(&["hcp", "-d", "-15"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n191025\n-121287375\n");
}

#[test]
fn classnum() {
    assert_eq!(stdout(&moduli(&["classnum", "-d", "-20563"])), "13\n");
}

#[test]
fn thresholds_table() {
    let o = moduli(&["thresholds", "--format", "tsv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).collect();
    assert_eq!(rows.len(), 25);
    assert_eq!(rows[0], "1a\t3,3,4\t12\t30339\t30339");
    let json: serde_json::Value = serde_json::from_slice(&moduli(&["thresholds"]).stdout).unwrap();
    assert_eq!(json["entries"].as_array().unwrap().len(), 25);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(moduli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(moduli(&["forms"]).status.code(), Some(1));
    assert_eq!(moduli(&["forms", "-d", "-5"]).status.code(), Some(1));
    assert_eq!(moduli(&["run", "--jobs", "0"]).status.code(), Some(1));
    assert_eq!(
        moduli(&["run", "--ladder", "384,192"]).status.code(),
        Some(1)
    );
    assert_eq!(moduli(&["--help"]).status.code(), Some(0));
}

#[test]
fn corrupted_data_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["table-2_1.tsv", "table-4_1.tsv", "h-maxima.tsv"] {
        fs::copy(data_dir().join(f), dir.path().join(f)).unwrap();
    }
    let d = dir.path().to_str().unwrap();
    assert!(moduli(&["tables", "validate", "--data-dir", d])
        .status
        .success());
    let path = dir.path().join("table-2_1.tsv");
    let mut body = fs::read_to_string(&path).unwrap();
    body.push_str("-4\t1\t-4\t1\n");
    fs::write(&path, body).unwrap();
    let o = moduli(&["tables", "validate", "--data-dir", d]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
    let o = Command::new(env!("CARGO_BIN_EXE_moduli"))
        .args(["run", "--max-h3", "2"])
        .env("MODULI_DATA_DIR", d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn tables_regen_reproduces_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = moduli(&["tables", "regen", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
    for f in ["table-2_1.tsv", "table-4_1.tsv", "h-maxima.tsv"] {
        assert_eq!(
            fs::read(dir.path().join(f)).unwrap(),
            fs::read(data_dir().join(f)).unwrap()
        );
    }
}

#[test]
fn catalog_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("products.tsv");
    let o = moduli(&["catalog", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let tsv = fs::read_to_string(&out).unwrap();
    assert_eq!(tsv.lines().count(), 709);
    let stats: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stats["distinct"], 708);
}

#[test]
fn casegen_then_eliminate() {
    let dir = tempfile::tempdir().unwrap();
    let cands = dir.path().join("candidates.json");
    let verdicts = dir.path().join("verdicts.json");
    let o = moduli(&["casegen", "--max-h3", "2", "--out", cands.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2bii-B"));
    let file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cands).unwrap()).unwrap();
    assert_eq!(file["schema_version"], 1);
    let all = file["candidates"].as_array().unwrap();
    let small: Vec<_> = all
        .iter()
        .filter(|c| c["h1"].as_u64().unwrap() <= 4)
        .cloned()
        .collect();
    assert!(!small.is_empty());
    let subset = dir.path().join("subset.json");
    fs::write(
        &subset,
        serde_json::json!({"schema_version": 1, "candidates": small}).to_string(),
    )
    .unwrap();
    let o = moduli(&[
        "eliminate",
        "--candidates",
        subset.to_str().unwrap(),
        "--out",
        verdicts.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&verdicts).unwrap()).unwrap();
    let list = v["verdicts"].as_array().unwrap();
    assert_eq!(list.len(), small.len());
    assert!(list.iter().all(|x| x["status"] == "Eliminated"));
}

#[test]
fn positive_control_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cands = dir.path().join("c.json");
    let triple = serde_json::json!({"d1": -23, "d2": -23, "d3": -23, "case": "1a", "h1": 3, "h2": 3, "h3": 3});
    fs::write(
        &cands,
        serde_json::json!({"schema_version": 1, "candidates": [triple]}).to_string(),
    )
    .unwrap();
    let o = moduli(&["eliminate", "--candidates", cands.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdicts"][0]["status"], "RationalProductFound");
    assert_eq!(v["verdicts"][0]["witnesses"][0]["alpha"], "-12771880859375");
}

#[test]
fn partial_run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = moduli(&["run", "--max-h3", "2", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
        v
    };
    let a = run("a.json");
    let b = run("b.json");
    assert_eq!(a["schema_version"], 1);
    assert_eq!(a["proof"], b["proof"]);
    assert_eq!(a["proof"]["success"], true);
    assert_eq!(a["proof"]["catalog"]["stats"]["distinct"], 708);
    assert!(a["telemetry"]["total_seconds"].as_f64().unwrap() > 0.0);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_moduli"))
        .args(["hcp", "-d", "-23"])
        .env("MODULI_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let cached = fs::read_to_string(dir.path().join("hcp").join("23.txt")).unwrap();
    assert_eq!(cached, "1\n3491750\n-5151296875\n12771880859375\n");
}
