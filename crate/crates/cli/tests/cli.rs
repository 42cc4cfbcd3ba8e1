use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn pretzel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pretzel"))
        .args(args)
        .env_remove("PRETZEL_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = pretzel(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn report_six_has_vinberg_witness() {
    let v = json(&["report", "--n", "6", "--format", "json"]);
    assert_eq!(v["geodesic"]["gram_entry"], "-10/3");
    assert_eq!(v["arithmeticity"]["verdict"], "non-arithmetic");
    assert_eq!(v["precision_bits"], 256);
    assert_eq!(v["volume"]["precision_bits"], 256);
}

#[test]
fn report_three_field() {
    let v = json(&["report", "--n", "3", "--format", "json"]);
    assert_eq!(v["trace_field"]["min_poly"], "x^2+1");
    assert_eq!(v["symmetry"]["hidden"], "infinite");
}

#[test]
fn report_prime_family_hidden_count() {
    let v = json(&["report", "--n", "5", "--twists", "01111", "--format", "json"]);
    assert_eq!(v["symmetry"]["hidden"], "10");
    assert_eq!(v["symmetry"]["sym"], "8");
    assert_eq!(v["symmetry"]["sym_plus"], "–");
}

#[test]
fn report_is_deterministic_and_round_trips() {
    let a = pretzel(&["report", "--n", "9", "--format", "json", "--precision", "128"]);
    let b = pretzel(&["report", "--n", "9", "--format", "json", "--precision", "128"]);
    assert_eq!(a.stdout, b.stdout);
    let doc: pretzel_report::ReportShape = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc.manifold.n, 9);
}

mod pretzel_report {
    #[derive(serde::Deserialize)]
    pub struct ReportShape {
        pub manifold: Manifold,
    }
    #[derive(serde::Deserialize)]
    pub struct Manifold {
        pub n: u64,
    }
}

#[test]
fn bad_inputs_exit_with_usage_code() {
    assert_eq!(pretzel(&["report", "--n", "2"]).status.code(), Some(1));
    assert_eq!(pretzel(&["report", "--n", "5", "--twists", "0101"]).status.code(), Some(1));
    assert_eq!(pretzel(&["fields", "--table", "--max", "2"]).status.code(), Some(1));
    assert_eq!(pretzel(&["classify", "--range", "5..3"]).status.code(), Some(1));
    assert_eq!(pretzel(&["nonsense"]).status.code(), Some(1));
    assert_eq!(pretzel(&["--help"]).status.code(), Some(0));
}

#[test]
fn fields_table_degrees() {
    let o = pretzel(&["fields", "--table", "--max", "10", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let degrees: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(degrees, ["2", "2", "4", "2", "6", "4", "6", "4"]);
    assert!(text.contains("3,2,x^2+1,"));
    assert!(text.contains("4,2,x^2+2,"));
    assert!(text.contains("6,2,x^2+3,"));
}

#[test]
fn fields_equal() {
    assert!(stdout(&pretzel(&["fields", "--equal", "3", "6"])).starts_with("false\n"));
    assert!(stdout(&pretzel(&["fields", "--equal", "7", "7"])).starts_with("true\n"));
    let v = json(&["fields", "--equal", "5", "10", "--format", "json"]);
    assert_eq!(v["equal"], false);
    assert_eq!(v["level"], 20);
}

#[test]
fn classify_range() {
    let v = json(&["classify", "--range", "3..10", "--format", "json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for r in rows {
        let n = r["n"].as_u64().unwrap();
        assert_eq!(r["verdict"] == "arithmetic", n == 3 || n == 4);
    }
    let eight = &rows[5];
    assert!(eight["evidence"].as_str().unwrap().starts_with("degree!"));
    let fs: Vec<f64> = rows
        .iter()
        .map(|r| r["f"]["value"].as_str().unwrap().parse().unwrap())
        .collect();
    assert!(fs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn classify_with_unreadable_table_warns() {
    let o = pretzel(&["classify", "--range", "7..8", "--nr-table", "/nonexistent/table.json"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(stdout(&o).contains("unavailable"));
}

#[test]
fn classify_with_shipped_table() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/nr_table.json");
    let o = pretzel(&["classify", "--range", "7..8", "--nr-table", path]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("unavailable"));
}

#[test]
fn cache_gives_identical_reports_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("fields.json");
    let c = cache.to_str().unwrap();
    let plain = pretzel(&["report", "--n", "12", "--format", "json", "--precision", "64"]);
    let first = pretzel(&["report", "--n", "12", "--format", "json", "--precision", "64", "--cache", c]);
    let second = pretzel(&["report", "--n", "12", "--format", "json", "--precision", "64", "--cache", c]);
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(plain.stdout, second.stdout);
    assert!(cache.exists());

    let text = fs::read_to_string(&cache).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["fields"]["12"]["degree"] = Value::from(5);
    fs::write(&cache, v.to_string()).unwrap();
    let o = pretzel(&["report", "--n", "12", "--cache", c]);
    assert_eq!(o.status.code(), Some(2));
    let o = pretzel(&["verify", "--suite", "graphs", "--cache", c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL [graphs] cache re-verification"));
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.json");
    let o = Command::new(env!("CARGO_BIN_EXE_pretzel"))
        .args(["fields", "--equal", "5", "8"])
        .env("PRETZEL_CACHE", &cache)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(cache.exists());
}

#[test]
fn verify_graphs_suite() {
    let v = json(&["verify", "--suite", "graphs", "--format", "json"]);
    assert_eq!(v["failed"], 0);
    assert!(v["cases"].as_u64().unwrap() > 28_000);
}

#[test]
fn max_hidden_needs_v0() {
    let o = pretzel(&["max-hidden", "--n", "7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("constant not provided"));
    let o = pretzel(&["max-hidden", "--volume", "40", "--v0", "0.04"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 1000.0);
    assert_eq!(pretzel(&["max-hidden", "--volume", "40", "--v0", "-1"]).status.code(), Some(1));
}

#[test]
fn commensurability() {
    assert!(stdout(&pretzel(&["commensurable", "5:00000", "5:01101"])).starts_with("true"));
    let v = json(&["commensurable", "3", "4", "--format", "json"]);
    assert_eq!(v["case"], "distinct-trace-fields");
    let v = json(&["commensurable", "4", "7", "--format", "json"]);
    assert_eq!(v["case"], "arithmetic-versus-not");
}

#[test]
fn hidden_bounds_at_100() {
    let v = json(&["hidden-bounds", "--n", "100", "--format", "json"]);
    assert_eq!(v["contains_2n"], true);
    assert_eq!(pretzel(&["hidden-bounds", "--n", "100", "--epsilon", "0"]).status.code(), Some(1));
}

#[test]
fn graph_round_trip_and_forest() {
    let dir = tempfile::tempdir().unwrap();
    let g = pretzel(&["graph", "--pretzel", "5"]);
    assert!(g.status.success());
    let gp = dir.path().join("p5.json");
    fs::write(&gp, &g.stdout).unwrap();
    let fp = dir.path().join("forest.json");
    fs::write(
        &fp,
        r#"{"trees":[{"edges":[0,5,10],"middle":0},{"edges":[2,7,12],"middle":2},{"edges":[4],"middle":4}]}"#,
    )
    .unwrap();
    let v = json(&[
        "graph",
        "--file",
        gp.to_str().unwrap(),
        "--twists",
        "01101",
        "--forest",
        fp.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(v["criterion_holds"], true);
    assert_eq!(v["forest_edge_symmetric"], true);
    assert_eq!(v["genus"], 0);
    assert_eq!(pretzel(&["graph", "--file", "/nonexistent.json"]).status.code(), Some(3));
}
