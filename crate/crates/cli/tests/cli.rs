use std::io::Write;
use std::process::{Command, Stdio};

use macx::hochster::{bigraded_betti, SweepOptions};
use macx::taylor::{tor_dims_via_taylor, TaylorOptions};
use macx::{constructions, FieldKind};
use macx_cli::{cross_check, run, EXIT_CAP, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn macx(args: &[&str]) -> macx_cli::Outcome {
    let mut argv = vec!["macx"];
    argv.extend_from_slice(args);
    run(argv, &mut std::io::empty())
}

fn macx_stdin(args: &[&str], input: &str) -> macx_cli::Outcome {
    let mut argv = vec!["macx"];
    argv.extend_from_slice(args);
    run(argv, &mut input.as_bytes())
}

fn result(out: &macx_cli::Outcome) -> Value {
    let v: Value = serde_json::from_str(&out.stdout).expect("json output");
    v["result"].clone()
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("betti_square_both.json", &["betti", "--in", "catalog:polygon(4)", "--oracle", "both"]),
    ("betti_i12_gf3.txt", &["betti", "--in", "catalog:I12", "--field", "gf3", "--format", "text"]),
    ("props_o6.json", &["props", "--in", "catalog:O6"]),
    ("fingerprint_o6.json", &["fingerprint", "--in", "catalog:O6"]),
    ("compare_c4_c5.json", &["compare", "--a", "catalog:polygon(4)", "--b", "catalog:polygon(5)"]),
    ("toric_equiv_cube.json", &["toric", "equiv", "--in", "catalog:O6", "--matrix", "cube:2", "--other", "cube:-2"]),
    ("product_square.json", &["product", "--in", "catalog:polygon(4)", "--x", "mf:1,3", "--y", "mf:2,4"]),
    ("construct_ep_i12.json", &["construct", "ep", "--polytope", "icosahedron"]),
];

#[test]
fn golden_outputs() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (file, args) in GOLDEN {
        let expected = std::fs::read_to_string(dir.join(file)).unwrap();
        let out = macx(args);
        assert_eq!(out.stdout, expected, "{file}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["props", "--in", "catalog:I12"][..],
        &["fingerprint", "--in", "catalog:B(7)", "--field", "gf3"],
        &["betti", "--in", "catalog:B(8)", "--oracle", "both", "--multigraded"],
    ] {
        let a = macx(args);
        let b = macx(args);
        assert_eq!(a.code, EXIT_OK);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let a = result(&macx(&["betti", "--in", "catalog:I12", "--threads", "1"]));
    let b = result(&macx(&["betti", "--in", "catalog:I12", "--threads", "3"]));
    assert_eq!(a, b);
}

#[test]
fn corrupted_rank_is_reported() {
    let k = constructions::catalog("O6").unwrap();
    let f = FieldKind::Prime(2);
    let h = bigraded_betti(&k, f, SweepOptions::default()).unwrap();
    let t = tor_dims_via_taylor(&k, f, TaylorOptions::default(), false).unwrap();
    let (v, code) = cross_check(&h, &t);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["agree"], true);
    let mut bad = t.clone();
    *bad.ranks.get_mut(&(2, 4)).unwrap() += 1;
    let (v, code) = cross_check(&h, &bad);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["mismatch"]["i"], 2);
    assert_eq!(v["mismatch"]["j"], 4);
    bad.ranks.insert((7, 7), 1);
    *bad.ranks.get_mut(&(2, 4)).unwrap() -= 1;
    assert_eq!(cross_check(&h, &bad).1, EXIT_NEGATIVE);
}

#[test]
fn corrupted_multigraded_rank_is_reported() {
    let k = constructions::catalog("polygon(5)").unwrap();
    let f = FieldKind::Prime(3);
    let opts = SweepOptions { multigraded: true, ..SweepOptions::default() };
    let h = bigraded_betti(&k, f, opts).unwrap();
    let mut t = tor_dims_via_taylor(&k, f, TaylorOptions::default(), true).unwrap();
    let mg = t.multigraded.as_mut().unwrap();
    let (&a, _) = mg.iter().find(|(k, _)| k.0 == 2).unwrap();
    let (&b, _) = mg.iter().filter(|(k, _)| k.0 == 2).nth(1).unwrap();
    *mg.get_mut(&a).unwrap() += 1;
    *mg.get_mut(&b).unwrap() -= 1;
    let (v, code) = cross_check(&h, &t);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(v["mismatch"].get("J").is_some());
}

#[test]
fn malformed_json_exits_with_usage_code() {
    let out = macx_stdin(&["betti", "--stdin"], "{\"m\": 3, \"facets\": [[1,2]");
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("json"));
    let out = macx_stdin(&["betti", "--stdin"], "{\"m\": 2, \"facets\": [[1,5]]}");
    assert_eq!(out.code, EXIT_USAGE);
    assert_eq!(macx(&["betti"]).code, EXIT_USAGE);
    assert_eq!(macx(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(macx(&["betti", "--in", "catalog:O6", "--field", "gf4"]).code, EXIT_USAGE);
}

#[test]
fn cap_exceeded_exit_code() {
    assert_eq!(macx(&["betti", "--in", "catalog:I12", "--sweep-cap", "8"]).code, EXIT_CAP);
    assert_eq!(macx(&["props", "--in", "catalog:I12", "--scc-cap", "2"]).code, EXIT_CAP);
}

#[test]
fn negative_verdicts() {
    assert_eq!(macx(&["compare", "--a", "catalog:O6", "--b", "catalog:B(7)"]).code, EXIT_NEGATIVE);
    assert_eq!(macx(&["compare", "--a", "catalog:O6", "--b", "catalog:O6"]).code, EXIT_OK);
    let out = macx(&["toric", "equiv", "--in", "catalog:O6", "--matrix", "cube:0", "--other", "cube:1"]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert_eq!(result(&out)["equivalent"], false);
}

#[test]
fn square_betti_both_oracles() {
    let out = macx(&["betti", "--in", "catalog:polygon(4)", "--oracle", "both"]);
    assert_eq!(out.code, EXIT_OK);
    let entries = result(&out)["table"]["entries"].as_array().unwrap().clone();
    let b = entries.iter().find(|e| e["i"] == 1 && e["j"] == 2).unwrap();
    assert_eq!(b["rank"], 2);
}

#[test]
fn config_is_echoed() {
    let out = macx(&["fingerprint", "--in", "catalog:T4", "--field", "gf3", "--seed", "9", "--ring-cap", "12"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["config"]["field"], "gf3");
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["ring_cap"], 12);
}

#[test]
fn version_lists_catalog_checksums() {
    let out = macx(&["--version"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.lines().filter(|l| l.starts_with("catalog ")).count() >= 9);
}

#[test]
fn binary_pipeline_and_env_override() {
    let bin = env!("CARGO_BIN_EXE_macx");
    let ep = Command::new(bin).args(["construct", "ep", "--polytope", "icosahedron"]).output().unwrap();
    assert!(ep.status.success());
    let mut child = Command::new(bin)
        .args(["props", "--stdin", "--scc-sample", "20", "--seed", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&ep.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["flag"], true);
    assert_eq!(v["result"]["nsc"], true);
    assert_eq!(v["result"]["scc"]["verdict"], "holds");

    let out = Command::new(bin).args(["betti", "--in", "catalog:I12"]).env("MACX_SWEEP_CAP", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CAP));
}
