use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetromino")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tetromino-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn is_ratio_string(v: &serde_json::Value) -> bool {
    let Some(s) = v.as_str() else { return false };
    let Some((p, q)) = s.split_once('/') else { return false };
    let digits = |t: &str| !t.is_empty() && t.chars().all(|c| c.is_ascii_digit());
    digits(p.strip_prefix('-').unwrap_or(p)) && digits(q)
}

#[test]
fn tile_count_golden() {
    let o = run(&["tile", "count", "--m", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "84");
    let off = run(&["tile", "count", "--m", "1", "--n", "2", "--pruning", "off"]);
    assert_eq!(stdout(&off).trim(), "6");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["tile", "count", "--m", "0", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "identity", "--m", "1", "--n", "1", "--q", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "identity", "--m", "1", "--n", "1", "--q", "complex:0.5", "--mode", "exact"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["genfun", "eval", "--m", "1", "--n", "1", "--weights", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn verify_identity_small() {
    let o = run(&["verify", "identity", "--m", "1", "--n", "2", "--q", "1", "--x", "uniform:1", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lhs=24\n"), "{out}");
    assert!(out.contains("rhs=24\n"), "{out}");
    assert!(out.contains("equal=true"), "{out}");
}

#[test]
fn verify_identity_json_is_deterministic_and_rational() {
    let args = ["--json", "--seed", "11", "verify", "identity", "--m", "2", "--n", "2", "--q", "81/16", "--x", "random"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["result"]["equal"], true);
    for key in ["lhs", "rhs", "f", "Q", "rhs_delcon"] {
        assert!(is_ratio_string(&doc["result"][key]), "{key}: {}", doc["result"][key]);
    }
    assert!(doc["input"]["x_values"].as_array().unwrap().iter().all(is_ratio_string));
    assert_eq!(doc["result"]["lhs"], doc["result"]["rhs"]);
    assert!(doc["provenance"]["rhs_engine"].is_string());

    let other = run(&["--json", "--seed", "12", "verify", "identity", "--m", "2", "--n", "2", "--q", "81/16", "--x", "random"]);
    assert_ne!(json(&other)["input"]["x_values"], doc["input"]["x_values"]);
}

#[test]
fn verify_identity_complex() {
    let doc = json(&run(&["--json", "verify", "identity", "--m", "2", "--n", "2", "--q", "complex:0.6283185307179586"]));
    assert_eq!(doc["input"]["mode"], "complex");
    assert_eq!(doc["result"]["equal"], true);
    assert!(doc["result"]["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn enumerate_writes_json_lines() {
    let path = scratch("enum.jsonl");
    let o = run(&["tile", "enumerate", "--m", "1", "--n", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l["tiles"].as_array().unwrap().len() == 8 && l["m"] == 1 && l["n"] == 2));

    let limited = run(&["tile", "enumerate", "--m", "1", "--n", "2", "--limit", "2"]);
    assert_eq!(stdout(&limited).lines().count(), 2);
    assert_eq!(stdout(&limited).lines().next(), text.lines().next());
}

#[test]
fn genfun_eval_from_weight_file() {
    // q = 16: the two pinwheels carry b-exponents (4, 0) and (0, 4)
    let path = scratch("weights.json");
    std::fs::write(&path, r#"{"a": [], "b1": "2", "b2": "1/2"}"#).unwrap();
    let o = run(&["genfun", "eval", "--m", "1", "--n", "1", "--weights", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "257/16");

    let doc = json(&run(&["--json", "genfun", "eval", "--m", "1", "--n", "1", "--weights", path.to_str().unwrap(), "--mode", "complex"]));
    let f = doc["result"]["f"].as_array().unwrap();
    assert!((f[0].as_f64().unwrap() - 257.0 / 16.0).abs() < 1e-12);

    std::fs::write(&path, r#"{"a": [{"o": 1, "w": [0, 2], "value": "3"}], "b1": "1", "b2": "1"}"#).unwrap();
    assert_eq!(run(&["genfun", "eval", "--m", "1", "--n", "1", "--weights", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn cycle_classes_records() {
    let o = run(&["cycles", "classes", "--m", "1", "--n", "2"]);
    let records: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 2);
    let total: u64 = records.iter().map(|r| r["size"].as_u64().unwrap()).sum();
    assert_eq!(total, 6);
    for r in &records {
        assert_eq!(r["size"].as_u64().unwrap(), 1 << r["l"].as_u64().unwrap());
        let mult: u64 = r["b_exponent_multiset"].as_array().unwrap().iter().map(|p| p[1].as_u64().unwrap()).sum();
        assert_eq!(mult, r["size"].as_u64().unwrap());
    }
}

#[test]
fn tutte_commands() {
    assert_eq!(stdout(&run(&["tutte", "classical", "--grid", "2", "2", "--x", "3", "--y", "3"])).trim(), "42");
    assert_eq!(run(&["tutte", "classical", "--grid", "2", "2", "--x", "1", "--y", "3"]).status.code(), Some(2));

    let path = scratch("grid.json");
    std::fs::write(&path, r#"{"vertices": 4, "edges": [[0, 1, "1/2"], [2, 3, "1"], [0, 2, "2"], [1, 3, "-1/3"]]}"#).unwrap();
    let p = path.to_str().unwrap();
    let values: Vec<String> = ["subset", "delcon", "transfer", "auto"]
        .iter()
        .map(|e| stdout(&run(&["tutte", "eval", "--graph", p, "--Q", "3/2", "--engine", e])).trim().to_string())
        .collect();
    assert!(values.iter().all(|v| v == &values[0]), "{values:?}");

    // brute-force Potts sum at Q = 2 on the 4-cycle with weights (1/2, 1, 2, -1/3)
    let v = [0.5, 1.0, 2.0, -1.0 / 3.0];
    let edges = [(0, 1), (2, 3), (0, 2), (1, 3)];
    let mut z = 0.0;
    for spins in 0..16u32 {
        let s = |i: usize| (spins >> i) & 1;
        z += edges.iter().zip(v).map(|(&(a, b), w)| if s(a) == s(b) { 1.0 + w } else { 1.0 }).product::<f64>();
    }
    let doc = json(&run(&["--json", "tutte", "eval", "--graph", p, "--Q", "2", "--mode", "complex"]));
    assert!((doc["result"]["Z"][0].as_f64().unwrap() - z).abs() < 1e-12);

    std::fs::write(&path, r#"{"vertices": 3, "edges": [[0, 1, "1"], [1, 2, "1"], [2, 0, "1"]]}"#).unwrap();
    assert_eq!(run(&["tutte", "eval", "--graph", p, "--Q", "2", "--engine", "transfer"]).status.code(), Some(2));
}

#[test]
fn entropy_commands() {
    let doc = json(&run(&["--json", "entropy", "baxter", "--Q", "4"]));
    assert!((doc["result"]["point"]["log_s"].as_f64().unwrap() - 1.566377570827).abs() < 1e-9);
    assert_eq!(doc["result"]["point"]["regime"], "critical");

    // lambda = ln 3 corresponds to Q = (10/3)^2
    let q = (100.0f64 / 9.0).to_string();
    let doc = json(&run(&["--json", "--tol", "1e-10", "entropy", "baxter", "--Q", &q]));
    assert!((doc["result"]["point"]["log_s"].as_f64().unwrap() - 1.773429557975).abs() < 1e-9);
    assert_eq!(doc["input"]["tol"], 1e-10);

    let doc = json(&run(&["--json", "entropy", "finite-size", "--Q", "4", "--max-size", "3"]));
    let est = doc["result"]["estimates"].as_array().unwrap();
    assert_eq!(est.len(), 3);
    assert!((est[0]["S"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(doc["result"]["target_S"].as_f64().unwrap() > est[2]["S"].as_f64().unwrap());

    assert_eq!(run(&["entropy", "baxter", "--Q", "-1"]).status.code(), Some(2));
}

#[test]
fn threads_flag_accepted() {
    let o = run(&["--threads", "1", "--json", "tile", "count", "--m", "1", "--n", "1"]);
    assert_eq!(json(&o)["result"]["count"], "2");
    assert_eq!(run(&["--threads", "0", "tile", "count", "--m", "1", "--n", "1"]).status.code(), Some(2));
}
