use std::path::Path;
use std::process::{Command, Output};

use frbc::report::{reference_abscissas, value_table, Which};
use frbc::{PrecisionContext, TfSolution};

fn frbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frbc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(csv: &'a str, key: &str) -> &'a str {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key} in {csv}"))
}

#[test]
fn default_solve_prints_slope() {
    let text = stdout(&frbc(&["solve"]));
    assert!(text.starts_with("key,value\n"));
    assert_eq!(field(&text, "N"), "50");
    assert_eq!(field(&text, "iterations"), "45");
    assert_eq!(field(&text, "digits"), "50");
    assert!(field(&text, "slope").starts_with("-1.58807102"));
    assert!(!text.contains('\r'));
}

#[test]
fn minimal_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let text = stdout(&frbc(&["solve", "--n", "0", "--iterations", "1", "--save", path.to_str().unwrap()]));
    assert_eq!(field(&text, "N"), "0");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["coeffs"].as_array().unwrap().len(), 1);
    assert_eq!(doc["N"], 0);
    assert_eq!(doc["alpha"].as_str().unwrap().trim_end_matches('0'), "0.5");
}

#[test]
fn json_summary_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let out = frbc(&[
        "solve", "--n", "6", "--iterations", "3", "--format", "json", "--trace", trace.to_str().unwrap(),
    ]);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["N"], 6);
    assert!(summary["slope"].is_string());
    let records: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 3);
}

#[test]
fn table_from_saved_solution_matches_in_process() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    stdout(&frbc(&["solve", "--n", "12", "--iterations", "8", "--save", path.to_str().unwrap()]));
    let table = stdout(&frbc(&["table", "--solution", path.to_str().unwrap(), "--which", "dy"]));

    let solution = TfSolution::load(Path::new(&path)).unwrap();
    let ctx = *solution.context();
    let mut expected = Vec::new();
    value_table(&solution, Which::Derivative, &reference_abscissas(&ctx))
        .unwrap()
        .write_csv(&mut expected)
        .unwrap();
    assert_eq!(table, String::from_utf8(expected).unwrap());
    assert_eq!(table.lines().count(), 53);
    assert!(table.starts_with("x,dy\n0.25"));

    let (direct, _) = frbc::RunConfig {
        order: 12,
        iterations: 8,
        ..Default::default()
    }
    .solve()
    .unwrap();
    assert_eq!(direct.coeffs(), solution.coeffs());
}

#[test]
fn table_at_origin_is_one() {
    let text = stdout(&frbc(&["table", "--n", "5", "--iterations", "2", "--x-list", "0"]));
    let ctx = PrecisionContext::new(50).unwrap();
    assert_eq!(text, format!("x,y\n0,{}\n", ctx.format(&ctx.one())));
}

#[test]
fn table_json_output() {
    let text = stdout(&frbc(&["table", "--n", "4", "--iterations", "2", "--x-list", "1,2", "--format", "json"]));
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows[1]["y"].is_string());
}

#[test]
fn convergence_lattice_shape() {
    let text = stdout(&frbc(&["convergence", "--n", "4,6", "--iterations", "1,3", "--x-list", "0,10"]));
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "N,iteration,x,y,dy");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(lines[1].starts_with("4,1,0,1.0"));
    assert!(lines[8].starts_with("6,3,10.0"));
}

#[test]
fn residual_profile_outputs() {
    let text = stdout(&frbc(&["residual-profile", "--n", "4", "--iterations", "2", "--probe-count", "0"]));
    assert_eq!(text, "N,x,residual\n");
    let text = stdout(&frbc(&["residual-profile", "--n", "4,6", "--iterations", "2", "--probe-count", "5"]));
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().nth(1).unwrap().starts_with("4,0.01"));
}

#[test]
fn nonpositive_probe_is_usage_error() {
    for list in ["1,0", "-2"] {
        let out = frbc(&["residual-profile", "--n", "3", "--iterations", "1", "--x-list", list]);
        assert_eq!(out.status.code(), Some(64), "{list}");
    }
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["solve", "--digits", "10"],
        vec!["solve", "--alpha", "abc"],
        vec!["solve", "--alpha", "-1"],
        vec!["solve", "--iterations", "0"],
        vec!["table", "--x-list", "1,x"],
        vec!["nonsense"],
    ] {
        let out = frbc(&args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn grid_dump() {
    let text = stdout(&frbc(&["grid", "--n", "2"]));
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "index,x");
    assert!(lines[2].starts_with("2,1.0"));
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = frbc(&["table", "--n", "10", "--iterations", "6", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn missing_solution_file_fails() {
    let out = frbc(&["table", "--solution", "/nonexistent/solution.json"]);
    assert_eq!(out.status.code(), Some(1));
}
