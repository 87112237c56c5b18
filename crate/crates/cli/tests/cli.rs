//! End-to-end tests against the built `eea` binary.

use std::process::{Command, Output};

use eea_core::EvolutionAlgebra;
use serde_json::Value;

fn eea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eea"))
        .args(args)
        .env_remove("EEA_ENUM_CAP")
        .env_remove("EEA_MAX_BITS")
        .env_remove("EEA_GROUP_CAP")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn gen_writes_loadable_json_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let out = eea(&["gen", "petersen", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["provenance"]["family"], "petersen");
    assert_eq!(value["provenance"]["descriptor"], "petersen");
    let algebra = EvolutionAlgebra::from_json_str(&text).unwrap();
    assert_eq!(algebra.dim(), 10);
    assert_eq!(algebra.nonzeros().count(), 30);

    let analyzed = eea(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&analyzed), 0);
    let report = json(&analyzed);
    assert_eq!(report["cheeger"]["h"], "1");
    assert_eq!(report["graph"]["regular"], 3);
    assert_eq!(report["spectrum"]["ramanujan"]["ramanujan"], true);
    assert_eq!(report["hierarchy"]["trivial"], true);
    assert_eq!(report["cover_times"]["max"], 2);
}

#[test]
fn gen_is_deterministic() {
    let a = eea(&["gen", "random-regular:20:3:7"]);
    let b = eea(&["gen", "random-regular", "--n", "20", "--d", "3", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, eea(&["gen", "random-regular:20:3:8"]).stdout);
}

#[test]
fn gen_dot() {
    let out = eea(&["gen", "cycle:5", "--format", "dot"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("graph"));
    assert_eq!(text.matches("--").count(), 5);
}

#[test]
fn certify_exit_codes() {
    let ok = eea(&["certify", "petersen", "--h", "1"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["holds"], true);

    let no = eea(&["certify", "cycle:6", "--h", "1"]);
    assert_eq!(code(&no), 1);
    let cert = json(&no);
    assert_eq!(cert["holds"], false);
    assert_eq!(cert["cheeger"]["h"], "2/3");
    assert_eq!(cert["cheeger"]["witness"], serde_json::json!([0, 1, 2]));

    let straddle = eea(&["certify", "random-regular:40:3", "--h", "1/2"]);
    assert_eq!(code(&straddle), 3);

    let capped = eea(&["certify", "direct-sum", "cycle:6", "complete:6", "--h", "1", "--cap", "10"]);
    assert_eq!(code(&capped), 4);

    assert_eq!(code(&eea(&["certify", "petersen"])), 2);
    assert_eq!(code(&eea(&["certify", "petersen", "--h", "1", "--cap", "41"])), 2);
    assert_eq!(code(&eea(&["certify", "wheel:5", "--h", "1"])), 2);
    assert_eq!(code(&eea(&["frobnicate"])), 2);
    assert_eq!(code(&eea(&["analyze", "--input", "/nonexistent/x.json"])), 2);
}

#[test]
fn cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_eea"))
        .args(["certify", "direct-sum", "cycle:6", "complete:6", "--h", "1"])
        .env("EEA_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&out), 4);
}

#[test]
fn spectral_fallback_decides_clear_cases() {
    let out = eea(&["certify", "random-regular:200:4", "--h", "1/10"]);
    assert_eq!(code(&out), 0);
    let cert = json(&out);
    assert!(cert.get("cheeger").is_none());
    assert_eq!(cert["bounds"]["d"], 4);
    assert_eq!(code(&eea(&["certify", "random-regular:200:4", "--h", "3"])), 1);
}

#[test]
fn mix_csv_and_json() {
    let out = eea(&["mix", "cycle:4", "--walk", "--kmax", "12"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,distance,paper_bound,corrected_bound");
    assert_eq!(lines.len(), 14);
    for line in &lines[1..] {
        let distance: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((distance - 1.0).abs() < 1e-12 || line.starts_with("0,"));
    }

    let out = eea(&["mix", "cycle:4", "--walk", "--kmax", "12", "--format", "json"]);
    let report = json(&out);
    assert_eq!(report["periodic"], true);
    assert_eq!(report["first_paper_violation"], 11);
    assert!(report["empirical_tmix"].is_null());

    let lazy = json(&eea(&["mix", "petersen", "--walk", "--loops", "--format", "json"]));
    assert_eq!(lazy["periodic"], false);
    assert!(lazy["empirical_tmix"].as_u64().is_some());

    assert_eq!(code(&eea(&["mix", "cycle:4"])), 2);
}

#[test]
fn audit_outputs() {
    let out = eea(&["audit", "kron", "cycle:4", "cycle:4"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["assertable_failures"], 0);
    let ids: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"tensor-product-expansion"));
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);

    let csv = eea(&["audit", "complete:4", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    let text = stdout(&csv);
    assert!(text.starts_with("check,input,lhs,rhs,margin\n"));
    assert!(text.contains("expansion-half-degree,complete:4,"));

    let table = eea(&["audit", "petersen", "--format", "table"]);
    assert_eq!(code(&table), 0);
    assert!(stdout(&table).contains("assertable failures: 0"));

    let sweep = eea(&["audit", "random-regular:10:3", "--sweep", "3", "--format", "json"]);
    assert_eq!(code(&sweep), 0);
    assert!(json(&sweep)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["id"] == "second-eigenvalue-below-degree"));
    assert_eq!(code(&eea(&["audit", "petersen", "--sweep", "3"])), 2);
}

#[test]
fn audit_is_reproducible() {
    let a = eea(&["audit", "random-regular:12:3:5"]);
    let b = eea(&["audit", "random-regular:12:3:5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_degrades_above_the_cap() {
    let out = eea(&["analyze", "random-regular:100:3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["cheeger"]["method"], "spectral-bounds-only");
    let notes = report["degradations"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("exact Cheeger")));
    assert!(report.get("hierarchy").is_none());

    let table = eea(&["analyze", "cycle:6", "--format", "table"]);
    assert!(stdout(&table).contains("cheeger.h: \"2/3\""));
}
