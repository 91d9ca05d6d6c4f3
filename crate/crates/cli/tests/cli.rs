use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn altder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altder"))
        .args(args)
        .current_dir(workspace())
        .output()
        .expect("binary runs")
}

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn verify_suite_passes_with_schema() {
    let out = altder(&["verify", "zorn-identities", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["suite"], "zorn-identities");
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["seed"], 42);
    assert!(v["version"].is_string());
    for c in v["checks"].as_array().unwrap() {
        assert!(c["name"].is_string());
        assert_eq!(c["verdict"], "pass");
        assert!(["certified", "exhaustive", "sampled"].contains(&c["provenance"].as_str().unwrap()));
    }
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = altder(&["verify", "no-such-suite"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-suite"));
}

#[test]
fn unknown_verb_and_target_are_usage_errors() {
    assert_eq!(code(&altder(&["frobnicate", "zorn"])), 2);
    assert_eq!(code(&altder(&["derivations", "no-such-instance"])), 2);
    assert_eq!(code(&altder(&["leibniz", "zorn", "--order", "1"])), 2);
}

#[test]
fn leibniz_order_four_on_remark22_contains_identity() {
    let out = altder(&["leibniz", "fixtures/remark22.json", "--order", "4", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["checks"][0]["witness"]["contains_identity"], true);
}

#[test]
fn zorn_fixture_matches_build_and_parses() {
    let text = std::fs::read_to_string(workspace().join("fixtures/zorn_gf3.json")).unwrap();
    let a = altder::format::parse_algebra(&text).unwrap();
    assert_eq!(a.dim(), 8);
    let out = altder(&["build", "zorn"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn malformed_files_give_diagnostics() {
    let out = altder(&["powers", "fixtures/bad_negative_dim.json"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dim"));
    let out = altder(&["powers", "fixtures/bad_duplicate_rows.json"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}

#[test]
fn exit_code_tracks_overall() {
    for args in [
        &["identities", "fixtures/zorn_gf3.json", "--json"][..],
        &["identities", "zorn", "--json"][..],
        &["derivations", "fixtures/zorn_gf3.json", "--json"][..],
        &["quasiderivations", "field1", "--json"][..],
        &["inner", "lemma23-Dx", "--json"][..],
    ] {
        let out = altder(args);
        let overall = json(&out)["overall"].as_str().unwrap().to_string();
        assert_eq!(code(&out) == 0, overall == "pass", "{args:?}");
    }
}

#[test]
fn reports_are_reproducible() {
    let a = altder(&["verify", "norm-multiplicativity", "--json"]);
    let b = altder(&["verify", "norm-multiplicativity", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = altder(&["verify", "norm-multiplicativity", "--json", "--seed", "7"]);
    assert_eq!(json(&c)["seed"], 7);
}

#[test]
fn parallel_verify_matches_sequential() {
    let seq = altder(&["verify", "all", "--json"]);
    let par = altder(&["verify", "all", "--json", "--parallel"]);
    assert_eq!(code(&seq), 0);
    assert_eq!(seq.stdout, par.stdout);
    let names: Vec<String> = json(&seq)
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names, altder::catalog::SUITES);
}

#[test]
fn out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = altder(&["powers", "remark22", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["checks"][0]["witness"]["dims"], serde_json::json!([7, 4, 2, 1, 0]));
}

#[test]
fn map_files_round_trip() {
    let out = altder(&["derivations", "mat2", "--json"]);
    let basis = json(&out)["checks"][0]["witness"]["basis"].clone();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    std::fs::write(
        &path,
        serde_json::to_string(&serde_json::json!({"map": basis[0]})).unwrap(),
    )
    .unwrap();
    let out = altder(&["inner", "mat2", "--map", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn invertible_values_modes() {
    assert_eq!(
        code(&altder(&["invertible-values", "lemma23-Dx", "--mode", "exhaustive"])),
        0
    );
    let out = altder(&["invertible-values", "lemma22-I", "--mode", "norm-certificate", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["checks"][0]["provenance"], "certified");
    assert_eq!(code(&altder(&["invertible-values", "zorn", "--mode", "sample"])), 2);
    assert_eq!(
        code(&altder(&["invertible-values", "lemma23-Dx", "--mode", "bogus"])),
        2
    );
}

#[test]
fn field_flag_applies_to_catalog_targets() {
    let out = altder(&["build", "zorn", "--field", "gf5"]);
    let a = altder::format::parse_algebra(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(a.field().order(), Some(5));
    assert_eq!(
        code(&altder(&["powers", "fixtures/remark22.json", "--field", "gf5"])),
        2
    );
}
