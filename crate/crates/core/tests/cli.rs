use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spin7-flat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("SPIN7_JOBS").output().expect("binary runs")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn validate(schema: &str, out: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let registry = jsonschema::Registry::new()
        .add("https://spin7-flat.local/defs.json", load("defs.json"))
        .unwrap()
        .prepare()
        .unwrap();
    let validator = jsonschema::options()
        .with_registry(&registry)
        .build(&load(schema))
        .expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:#?}");
    doc
}

#[test]
fn selftest_output_matches_schema() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = validate("selftest.json", &out);
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"S has eigenvalues 3 and -1"));
    assert!(names.contains(&"Gamma preserves Omega_0"));
    for fam in 1..=7 {
        assert!(names.contains(&format!("relation family {fam} on T^8").as_str()));
    }
}

#[test]
fn census_output_matches_schema() {
    let out = run(&["census"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = validate("census.json", &out);
    assert_eq!(doc["totals"]["ii"], 8);
    assert_eq!(doc["totals"]["iii"], 64);
    assert_eq!(doc["totals"]["i"], 4);
}

#[test]
fn enumerate_so3_has_105_records() {
    let out = run(&["enumerate", "--group", "so3", "--include-reducible"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = validate("enumerate.json", &out);
    assert_eq!(doc["records"].as_array().unwrap().len(), 105);
    assert_eq!(doc["certified_raw"], 630);
}

#[test]
fn enumerate_csv_has_fixed_header() {
    let out = run(&["enumerate", "--group", "SO(3)", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("status,gamma,delta,tau4,tau5,tau8,key,orbit_size,h0,h1,h2"));
    assert_eq!(lines.count(), 105);
}

#[test]
fn output_is_independent_of_job_count() {
    let one = bin().args(["enumerate", "--group", "so4", "--jobs", "1"]).output().unwrap();
    let four = bin().args(["enumerate", "--group", "so4"]).env("SPIN7_JOBS", "4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn certify_trivial_rep_is_reducible() {
    let out = run(&["certify", "--tuple", "(1, 1, 1, 1, 1)", "--group", "so3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = validate("certify.json", &out);
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["report"]["h0"], 3);
}

#[test]
fn certify_reads_rep_files() {
    let dir = tempfile::tempdir().unwrap();
    let rep = spin7_flat::certify::dihedral_so3_example();
    let path = dir.path().join("rep.json");
    std::fs::write(&path, serde_json::to_string(&rep).unwrap()).unwrap();
    let out = run(&["certify", "--input", path.to_str().unwrap()]);
    let doc = validate("certify.json", &out);
    assert_eq!(doc["report"]["h2"], 1);
    assert_eq!(doc["witness"]["form"], 3);
}

#[test]
fn invalid_rep_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut rep = spin7_flat::certify::FlatRep::trivial(3);
    let r = spin7_flat::linalg::QMatrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]);
    rep.set_image(spin7_flat::orbifold::Gen::Gamma, r);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&rep).unwrap()).unwrap();
    let out = run(&["certify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = validate("certify.json", &out);
    assert_eq!(doc["valid"], false);
}

#[test]
fn verify_appendix_so3_passes() {
    let out = run(&["verify-appendix", "--group", "so3"]);
    assert_eq!(out.status.code(), Some(0));
    validate("verify-appendix.json", &out);
}

#[test]
fn appendix_parse_errors_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("list.txt");
    std::fs::write(&path, "(b, 1, a, b, 1)\n(b, 1, z, b, 1)\n").unwrap();
    let out = run(&["verify-appendix", "--group", "so3", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn nogo_output_matches_schema() {
    let out = run(&["nogo", "--group", "so2", "--group", "so9"]);
    assert_eq!(out.status.code(), Some(0));
    validate("nogo.json", &out);
}

#[test]
fn topology_outputs_match_schemas() {
    let out = run(&["topology", "decompose", "--m", "2", "--k", "0"]);
    let doc = validate("topology-decompose.json", &out);
    assert_eq!(doc["decomposition"]["s0"], 4);

    let dir = tempfile::tempdir().unwrap();
    let inp = dir.path().join("inputs.json");
    std::fs::write(&inp, r#"{"dim_g": 3, "b0": 1, "b1": 0, "b2_7": 0, "I_pp": 0, "I_p2": 0, "I_q": 0}"#).unwrap();
    let out = run(&["topology", "index", "--json", inp.to_str().unwrap()]);
    let doc = validate("topology-index.json", &out);
    assert_eq!(doc["value"]["num"], -3);

    let charges = dir.path().join("charges.json");
    std::fs::write(&charges, r#"{"75": "1/2", "76": {"num": 1, "den": 2}}"#).unwrap();
    let out = run(&[
        "topology", "check-gluing", "--tuple", "(1, a, 1, 1, 1)", "--group", "so3",
        "--charges", charges.to_str().unwrap(), "--mutations",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = validate("topology-check-gluing.json", &out);
    assert_eq!(doc["pontryagin"]["p1"]["75"]["num"], -1);
    assert!(doc["mutations"].as_array().unwrap().iter().all(|m| m["passed"] == false));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["enumerate"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--group", "so99"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--input", "/nonexistent/rep.json"]).status.code(), Some(2));
}
