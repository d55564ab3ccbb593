use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn softtop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softtop"))
        .args(args)
        .env_remove("SOFTTOP_MAX_OPENS")
        .env_remove("SOFTTOP_MAX_COMPONENT_POINTS")
        .env_remove("SOFTTOP_MAX_FACTOR_OPENS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn indiscrete_space_is_connected() {
    let o = softtop(&["connected", &fixture("indiscrete.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"connected\":true}\n");
}

#[test]
fn discrete_space_reports_first_separation() {
    let o = softtop(&["connected", &fixture("discrete_2x1.json")]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("connected_discrete_2x1.golden")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn components_golden_shows_the_orphan() {
    let o = softtop(&["components", &fixture("power_set_1x2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("components_power_set_1x2.golden")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn component_cap_exits_3() {
    let o = softtop(&[
        "--max-component-points",
        "1",
        "components",
        &fixture("discrete_2x1.json"),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn hausdorff_verdicts() {
    let o = softtop(&["hausdorff", &fixture("sierpinski.json")]);
    assert_eq!(json(&o)["hausdorff"], false);
    assert_eq!(json(&o)["violation"], serde_json::json!(["a", "b"]));
    let o = softtop(&["hausdorff", &fixture("discrete_2x1.json")]);
    assert_eq!(json(&o)["hausdorff"], true);
}

#[test]
fn local_connectedness_depends_on_membership() {
    let all = softtop(&["locally-connected", &fixture("power_set_1x2.json")]);
    assert_eq!(json(&all)["holds"], false);
    let any = softtop(&[
        "locally-connected",
        "--membership",
        "any",
        &fixture("power_set_1x2.json"),
    ]);
    assert_eq!(json(&any)["holds"], true);
    let weak = softtop(&["locally-connected", "--weak", &fixture("discrete_2x1.json")]);
    assert_eq!(json(&weak)["property"], "weakly-locally-connected");
    assert_eq!(json(&weak)["holds"], true);
}

#[test]
fn validate_reports_violations() {
    let ok = softtop(&["validate", &fixture("sierpinski.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["valid"], true);
    let bad = softtop(&["validate", &fixture("missing_union.json")]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(json(&bad)["violations"][0]["kind"], "union-absent");
}

#[test]
fn validate_complete_emits_a_valid_document() {
    let o = softtop(&["validate", "--complete", &fixture("missing_union.json")]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("complete.json");
    std::fs::write(&path, stdout(&o)).unwrap();
    let again = softtop(&["validate", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
}

#[test]
fn malformed_inputs_exit_2() {
    let o = softtop(&["connected", &fixture("unknown_point.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown point"));
    let o = softtop(&["connected", &fixture("missing_union.json")]);
    assert_eq!(o.status.code(), Some(2));
    let o = softtop(&["connected", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = softtop(&[
        "continuous",
        &fixture("sierpinski.json"),
        &fixture("sierpinski.json"),
        &fixture("partial.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn continuity_reports_first_bad_open() {
    let s = fixture("sierpinski.json");
    let o = softtop(&["continuous", &s, &s, &fixture("swap.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["continuous"], false);
    assert_eq!(json(&o)["open"], serde_json::json!({"e": ["a"]}));
    let o = softtop(&["continuous", &s, &s, &fixture("identity.json")]);
    assert_eq!(json(&o)["continuous"], true);
}

#[test]
fn continuity_via_basis_agrees() {
    let s = fixture("sierpinski.json");
    let d = fixture("discrete_2x1.json");
    let basis = fixture("sierpinski_basis.json");
    for (src, map) in [(&s, "swap.json"), (&s, "identity.json"), (&d, "swap.json")] {
        let full = softtop(&["continuous", src, &s, &fixture(map)]);
        let via = softtop(&["continuous", src, &s, &fixture(map), "--basis", &basis]);
        assert_eq!(json(&full)["continuous"], json(&via)["continuous"]);
    }
    // A family that is not a basis is an input error.
    let o = softtop(&["continuous", &s, &s, &fixture("identity.json"), "--basis", &fixture("indiscrete.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn product_writes_a_valid_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prod.json");
    let o = softtop(&[
        "product",
        &fixture("sierpinski.json"),
        &fixture("power_set_1x2.json"),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["universe"], serde_json::json!(["(a,a)", "(b,a)"]));
    assert_eq!(doc["params"], serde_json::json!(["(e,e1)", "(e,e2)"]));
    let v = softtop(&["validate", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn product_factor_cap_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prod.json");
    let o = softtop(&[
        "--max-factor-opens",
        "2",
        "product",
        &fixture("sierpinski.json"),
        &fixture("sierpinski.json"),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cap_can_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_softtop"))
        .args(["components", &fixture("discrete_2x1.json")])
        .env("SOFTTOP_MAX_COMPONENT_POINTS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fuzz_exhaustive_is_reproducible() {
    let args = ["fuzz", "--suite", "prop-1-i", "--exhaustive", "--seed", "0"];
    let a = softtop(&args);
    let b = softtop(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["verdict"], "verified");
    assert_eq!(report["mode"], "exhaustive");
}

#[test]
fn fuzz_law_failure_exits_1_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = softtop(&[
        "fuzz",
        "--suite",
        "prop-1-ii",
        "--seed",
        "3",
        "--instances",
        "200",
        "--mutant",
        "complement-adds-element",
        "--artifacts",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("prop-1-ii.json").exists());
}

#[test]
fn fuzz_requires_a_seed_and_sane_bounds() {
    assert_eq!(softtop(&["fuzz", "--suite", "all"]).status.code(), Some(2));
    let o = softtop(&["fuzz", "--seed", "1", "--max-universe", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = softtop(&["fuzz", "--seed", "1", "--suite", "no-such-theorem"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fuzz_conjecture_counterexample_does_not_fail_the_run() {
    let o = softtop(&["fuzz", "--suite", "thm-9", "--seed", "42", "--instances", "200", "--table"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "counterexample");
    assert!(String::from_utf8_lossy(&o.stderr).contains("thm-9"));
}
