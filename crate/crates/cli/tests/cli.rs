use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn prymcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prymcheck"))
        .args(args)
        .env_remove("PRYMCHECK_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema_valid(doc: &Value) {
    let schema = schema();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "report violates schema: {msgs:#?}");
}

#[test]
fn verify_passes_and_cites_r_dot_k() {
    let out = prymcheck(&["verify", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("cone.R.K"));
    assert!(text.lines().any(|l| l.contains("cone.R.K") && l.contains("-1")));
    assert!(text.contains("overall: pass"));
}

#[test]
fn verify_json_is_schema_valid_and_deterministic() {
    let a = prymcheck(&["verify", "--json", "--no-timing"]);
    let b = prymcheck(&["verify", "--json", "--no-timing", "--parallel"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_schema_valid(&doc);
    assert_eq!(doc["overall"], "pass");

    let timed = prymcheck(&["verify", "--json"]);
    let doc: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert_schema_valid(&doc);
    assert!(doc["items"][0]["timing_ms"].is_number());
}

#[test]
fn schema_rejects_malformed_reports() {
    let compiled_schema = schema();
    let compiled = jsonschema::JSONSchema::compile(&compiled_schema).unwrap();
    let bad = serde_json::json!({
        "items": [{"claim_id": "other.x", "location": "", "computed_value": "1",
                   "expected_value": "1", "status": "ok"}],
        "overall": "pass",
        "notes": []
    });
    assert!(!compiled.is_valid(&bad));
}

#[test]
fn only_filters_to_module() {
    let out = prymcheck(&["verify", "--json", "--no-timing", "--only", "grr"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let items = doc["items"].as_array().unwrap();
    assert!(!items.is_empty());
    assert!(items.iter().all(|i| i["claim_id"].as_str().unwrap().starts_with("grr.")));
}

#[test]
fn perturbation_exits_one() {
    let out = prymcheck(&["verify", "--no-timing", "--perturb", "R.lambda=10"]);
    assert_eq!(out.status.code(), Some(1));
    let out = prymcheck(&["certify", "--perturb", "R.lambda=10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("no contradiction"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--bogus"],
        vec!["class", "nonsense"],
        vec!["verify", "--only", "nowhere"],
        vec!["verify", "--perturb", "R.lambda"],
        vec!["class", "d9", "--alpha", "0.5"],
        vec!["class", "d9", "--alpha", "-1"],
        vec!["class", "d9", "--genus", "8"],
        vec!["class", "canonical", "--genus", "1"],
    ] {
        let out = prymcheck(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn class_output() {
    let k = stdout(&prymcheck(&["class", "canonical", "--genus", "9"]));
    assert!(k.starts_with("13λ − 2δ₀′ − 2δ₀″ − 3δ₀^ram − 3δ₁"));
    let d = stdout(&prymcheck(&["class", "d9"]));
    assert_eq!(d.trim(), "366λ − 52δ₀′ − 52δ₀″ − (187/2)δ₀^ram");
    let d = stdout(&prymcheck(&["class", "d9", "--alpha", "3/2"]));
    assert!(d.contains("(107/2)δ₀″"));
    let z = stdout(&prymcheck(&["class", "degeneracy"]));
    assert_eq!(z.trim(), "−λ − (1/2)𝔞 + (1/2)𝔟 + (1/4)σ*δ₀^ram");
    let j: Value = serde_json::from_slice(&prymcheck(&["class", "d9", "--json"]).stdout).unwrap();
    assert_eq!(j["coeffs"]["delta0ram"], "-187/2");
}

#[test]
fn certify_prints_chain_and_round_trips_lp() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("out.lp");
    let out = prymcheck(&["certify", "--emit-lp", lp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("R·K = -1"));
    assert!(text.contains("not pseudo-effective"));
    assert!(text.contains("round trip ok"));
    for axiom in ["transversality", "R_moving", "A_sweeping", "BDPP"] {
        assert!(text.contains(axiom), "{axiom}");
    }
    let written = std::fs::read_to_string(&lp).unwrap();
    let parsed = prym_core::lp::parse_lp(&written).unwrap();
    assert_eq!(parsed, prym_core::cone::build_constraints(9).unwrap());
}

#[test]
fn out_dir_receives_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_prymcheck"))
        .args(["certify", "--json"])
        .env("PRYMCHECK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let saved: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("certify.json")).unwrap()).unwrap();
    assert_eq!(saved["r_dot_k"], "-1");
    assert_eq!(saved["certificate_verified"], true);
    assert_eq!(saved["conclusion"]["status"], "not_pseudo_effective");
    assert_eq!(saved["certificate_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn curve_table() {
    let text = stdout(&prymcheck(&["curves"]));
    let r = text.lines().find(|l| l.trim_start().starts_with("R ")).unwrap();
    let cells: Vec<&str> = r.split_whitespace().collect();
    assert_eq!(cells, ["R", "9", "47", "0", "8", "0"]);
    let a0pp = text.lines().find(|l| l.trim_start().starts_with("A0pp")).unwrap();
    assert!(a0pp.ends_with(" 1"), "{a0pp}");
}
