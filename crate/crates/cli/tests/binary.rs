use std::path::Path;
use std::process::{Command, Output};

fn quench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quench")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write_config(dir: &Path, name: &str, n: usize, post_hz: f64, extra: &str) -> String {
    let path = dir.join(name);
    let text = format!(
        r#"{{
  "N": {n},
  "pre": {{"J": -0.2, "hx": -1.0, "hz": 0.0}},
  "post": {{"J": -1.0, "hx": -0.1, "hz": {post_hz}}},
  "tau": 0.01,
  "t_max": 1.0,
  "policy": {{"cutoff": 1e-12, "chi_max": 64}},
  "measure_stride": 5,
  "observables": [
    {{"kind": "vnee_half"}},
    {{"kind": "negativity_pair"}},
    {{"kind": "levelk_sites", "sites": [4, 5]}},
    {{"kind": "energy"}},
    {{"kind": "bond_chi"}}
  ]{extra}
}}"#
    );
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn quench_writes_csv_svg_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let cfg = write_config(dir.path(), "run.json", 8, -0.5, &format!(r#", "output_path": "{}""#, out.display()));
    let o = quench(&["quench", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("time,vnee_half,negativity_pair_a4_d0,levelk_sites_4_5_k1,"));
    assert_eq!(csv.lines().count(), 22);
    let svg = std::fs::read_to_string(out.with_extension("svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert!(!doc.descendants().any(|n| n.text() == Some("bond_chi")));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["measurements"], 21);
    assert_eq!(summary["steps"], 100);

    let other = dir.path().join("other.csv");
    let o = quench(&["quench", &cfg, "--output", other.to_str().unwrap(), "--plot", "energy"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&other).unwrap(), csv.as_bytes());
    assert!(std::fs::read_to_string(other.with_extension("svg")).unwrap().contains(">energy<"));
}

#[test]
fn ground_reports_energy_and_entropies() {
    let o = quench(&["ground", "--n", "10", "--j", "-1", "--hx", "-1", "--hz", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let e = v["energy"].as_f64().unwrap();
    assert!(e < -10.0 && e > -13.0, "{e}");
    assert_eq!(v["bond_vnee"].as_array().unwrap().len(), 9);
}

#[test]
fn oracle_compare_honours_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.json", 6, -0.5, "");
    let report = dir.path().join("report.json");
    let o = quench(&["oracle-compare", &cfg, "--output", report.to_str().unwrap(), "--tolerance", "2e-4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() < 2e-4);
    let o = quench(&["oracle-compare", &cfg, "--tolerance", "1e-15"]);
    assert_eq!(code(&o), 2);
    let big = write_config(dir.path(), "big.json", 12, -0.5, "");
    assert_eq!(code(&quench(&["oracle-compare", &big])), 1);
}

#[test]
fn analyze_reads_a_quench_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let cfg = write_config(dir.path(), "run.json", 8, -0.5, "");
    assert_eq!(code(&quench(&["quench", &cfg, "--output", out.to_str().unwrap()])), 0);
    let o = quench(&["analyze", out.to_str().unwrap(), "--window", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["window"], 3);
    let names: Vec<&str> = v["observables"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["observable"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"vnee_half") && names.contains(&"levelk_sites_4_5"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&quench(&[])), 1);
    assert_eq!(code(&quench(&["launch"])), 1);
    assert_eq!(code(&quench(&["quench", "/nonexistent/run.json"])), 3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"N": 8}"#).unwrap();
    assert_eq!(code(&quench(&["quench", bad.to_str().unwrap()])), 1);
    let cfg = write_config(dir.path(), "run.json", 8, -0.5, "");
    assert_eq!(code(&quench(&["quench", &cfg])), 1);
    let o = quench(&["quench", &cfg, "--output", "/nonexistent/dir/run.csv"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/run.csv"));
    assert_eq!(code(&quench(&["analyze", "/nonexistent.csv"])), 3);
    assert_eq!(code(&quench(&["ground", "--n", "1", "--j", "-1", "--hx", "-1", "--hz", "0"])), 1);
}
