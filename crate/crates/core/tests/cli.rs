use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fusionkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionkit"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

/// Compares with a golden file; `FUSIONKIT_BLESS=1` rewrites it.
fn golden(name: &str, text: &[u8]) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("FUSIONKIT_BLESS").is_some() {
        std::fs::write(&path, text).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert!(want == text, "{name} differs from the golden file");
}

#[test]
fn c2_lim1_is_zero() {
    let o = fusionkit(&["run", "catalog/c2.gens", "--prime", "2", "lim1"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema"], "fusionkit.report.v1");
    assert_eq!(v["lim1"]["lim1_invariants"], Value::Array(vec![]));
    assert_eq!(v["lim1"]["lim0_invariants"], serde_json::json!(["2"]));
    assert!(v.get("out0").is_none());
    golden("c2_lim1.json", &o.stdout);
}

#[test]
fn s4_all_passes() {
    let o = fusionkit(&["run", "catalog/s4.gens", "--prime", "2", "all"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["failures"], Value::Array(vec![]));
    assert_eq!(v["group"]["order"], 24);
    assert_eq!(v["out0"]["structure"]["aut0_order"], 2);
    assert_eq!(v["kappa"]["kernel"]["kernel_order"], 1);
    for block in ["classify", "linking", "transporter", "locality", "roundtrip", "lim1", "out0", "kappa"] {
        assert!(v.get(block).is_some(), "{block}");
    }
    golden("s4_all.json", &o.stdout);
}

#[test]
fn reports_are_deterministic() {
    let a = fusionkit(&["run", "catalog/a5.gens", "--prime", "2"]);
    let b = fusionkit(&["run", "catalog/a5.gens", "--prime", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let t = fusionkit(&["run", "catalog/a5.gens", "--prime", "2", "--timing"]);
    assert!(json(&t)["timing_ms"].is_u64());
    assert!(json(&a).get("timing_ms").is_none());
}

#[test]
fn parse_error_gives_failure_block() {
    let dir = std::env::temp_dir().join(format!("fusionkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.gens");
    std::fs::write(&bad, "3\n1 2\n").unwrap();
    let o = fusionkit(&["run", bad.to_str().unwrap(), "--prime", "2", "all"]);
    assert!(!o.status.success());
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "Parse");
    assert_eq!(v["pass"], false);
    let o = fusionkit(&["run", dir.join("missing.gens").to_str().unwrap(), "--prime", "2"]);
    assert!(!o.status.success());
    assert_eq!(json(&o)["error"]["kind"], "Io");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors() {
    let o = fusionkit(&["run", "catalog/s4.gens", "--prime", "2", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "Usage");
    let o = fusionkit(&["run", "catalog/s4.gens", "--prime", "2", "--caps", "widgets=3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fusionkit(&["run", "catalog/s4.gens", "--prime", "4", "classify"]);
    assert!(!o.status.success());
    assert_eq!(json(&o)["error"]["kind"], "NotAPGroup");
}

#[test]
fn oracle_and_object_flags() {
    let o = fusionkit(&["run", "catalog/s4.gens", "--prime", "2", "--oracle", "off", "lim1", "out0"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["lim1"]["oracle"], Value::Null);
    assert!(v["out0"].get("bruteforce").is_none());
    let o = fusionkit(&["run", "catalog/s4.gens", "--prime", "2", "--objects", "subcentric", "locality"]);
    assert!(o.status.success());
    let v = json(&o);
    let r = &v["locality"]["restriction_to_centric"];
    assert_eq!(r["hypothesis"]["pass"], true);
    assert_eq!(r["larger_aut0"], r["smaller_aut0"]);
    assert!(r["larger_objects"].as_u64().unwrap() > r["smaller_objects"].as_u64().unwrap());
}

#[test]
fn catalog_rows_follow_manifest() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog");
    let manifest = dir.join(format!("test-manifest-{}.txt", std::process::id()));
    std::fs::write(&manifest, "# mixed\ns5.gens 2\nd8.gens 2\n\ns3.gens 3\n").unwrap();
    let o = fusionkit(&["catalog", manifest.to_str().unwrap(), "--caps", "group=100"]);
    std::fs::remove_file(&manifest).unwrap();
    assert!(!o.status.success());
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    let files: Vec<_> = rows.iter().map(|r| r["file"].as_str().unwrap()).collect();
    assert_eq!(files, ["s5.gens", "d8.gens", "s3.gens"]);
    let status: Vec<_> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["too-large", "pass", "pass"]);
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(2), Some(1)));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2 passed, 1 failed"));
}

#[test]
fn empty_manifest() {
    let manifest = std::env::temp_dir().join(format!("fusionkit-empty-{}.txt", std::process::id()));
    std::fs::write(&manifest, "# nothing\n").unwrap();
    let o = fusionkit(&["catalog", manifest.to_str().unwrap()]);
    std::fs::remove_file(&manifest).unwrap();
    assert!(o.status.success());
    assert_eq!(json(&o)["rows"], Value::Array(vec![]));
}

#[test]
fn theorem_filter() {
    let o = fusionkit(&["catalog", "catalog/manifest.txt", "--theorem", "3"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["theorem"], 3);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["report"]["tasks"], serde_json::json!(["classify", "lim1"]));
        assert!(row["report"].get("kappa").is_none());
    }
    let o = fusionkit(&["catalog", "catalog/manifest.txt", "--theorem", "5"]);
    assert!(!o.status.success());
}
