use std::io::Cursor;
use std::path::PathBuf;
use std::process::Command;

use nl2vis_cli::{run, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn invoke(args: &[&str], stdin: &str) -> (u8, String, String) {
    let argv: Vec<String> = std::iter::once("nl2vis").chain(args.iter().copied()).map(String::from).collect();
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn analytic_output_is_one_json_line() {
    let movies = fixture("movies.csv");
    let (code, out, _) = invoke(&["--data", &movies, "--query", "Show a histogram of IMDB rating"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);
    let spec: Value = serde_json::from_str(out.trim()).unwrap();
    let keys: Vec<&String> = spec.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["attributeMap", "taskMap", "visList"]);
    assert_eq!(spec["visList"][0]["vlSpec"]["data"]["name"], "movies");
}

#[test]
fn vegalite_output_inlines_rows() {
    let cars = fixture("cars.csv");
    let (code, out, _) = invoke(
        &["--data", &cars, "--query", "Show mpg against horsepower", "--output", "vegalite"],
        "",
    );
    assert_eq!(code, EXIT_OK);
    let vl: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(vl["mark"], "point");
    assert!(vl["data"]["values"].as_array().unwrap().len() > 10);
}

#[test]
fn both_outputs_two_lines() {
    let cars = fixture("cars.csv");
    let (code, out, _) = invoke(&["--data", &cars, "--query", "Show mpg", "--output", "both", "--debug"], "");
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let spec: Value = serde_json::from_str(lines[0]).unwrap();
    assert!(spec["debug"]["timings"].is_object());
    assert!(serde_json::from_str::<Value>(lines[1]).unwrap()["$schema"].is_string());
}

#[test]
fn vegalite_without_charts_is_a_note() {
    let cars = fixture("cars.csv");
    let (code, out, err) = invoke(&["--data", &cars, "--query", "hello there", "--output", "vegalite"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(err.contains("no visualization"), "{err}");
}

#[test]
fn missing_query_is_usage_error() {
    let cars = fixture("cars.csv");
    let (code, _, err) = invoke(&["--data", &cars], "");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--query"));
    let (code, _, _) = invoke(&["--data", &cars, "--query", "  "], "");
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = invoke(&["--query", "x"], "");
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = invoke(&["--data", &cars, "--query", "x", "--output", "png"], "");
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = invoke(&["--help"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("--repl"));
}

#[test]
fn unreadable_data_exits_one() {
    let (code, _, err) = invoke(&["--data", "/nonexistent/x.csv", "--query", "x"], "");
    assert_eq!(code, EXIT_DATA);
    assert!(err.starts_with("error:"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "a,b\n1,2,3\n").unwrap();
    let (code, _, _) = invoke(&["--data", bad.to_str().unwrap(), "--query", "x"], "");
    assert_eq!(code, EXIT_DATA);
}

#[test]
fn explicit_format_overrides_extension() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scores.txt");
    std::fs::write(&path, "team\tscore\nred\t3\nblue\t5\n").unwrap();
    let (code, out, _) = invoke(
        &["--data", path.to_str().unwrap(), "--format", "tsv", "--query", "Show score by team"],
        "",
    );
    assert_eq!(code, EXIT_OK);
    let spec: Value = serde_json::from_str(out.trim()).unwrap();
    assert!(spec["attributeMap"]["score"].is_object());
    assert!(spec["attributeMap"]["team"].is_object());
}

#[test]
fn alias_map_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let aliases = dir.path().join("aliases.json");
    std::fs::write(&aliases, r#"{"Production Budget": ["investment"]}"#).unwrap();
    let movies = fixture("movies.csv");
    let (code, out, _) = invoke(
        &[
            "--data",
            &movies,
            "--alias-map",
            aliases.to_str().unwrap(),
            "--query",
            "Show me the investment and gross",
        ],
        "",
    );
    assert_eq!(code, EXIT_OK);
    let spec: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(spec["attributeMap"]["Production Budget"]["inferenceType"], "explicit");

    std::fs::write(&aliases, r#"{"Budget": ["money"]}"#).unwrap();
    let (code, _, _) = invoke(
        &["--data", &movies, "--alias-map", aliases.to_str().unwrap(), "--query", "x"],
        "",
    );
    assert_eq!(code, EXIT_DATA);
}

#[test]
fn config_file_changes_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(&cfg, r#"{"similarityThreshold": 1.5}"#).unwrap();
    let cars = fixture("cars.csv");
    let (code, _, err) = invoke(&["--data", &cars, "--config", cfg.to_str().unwrap(), "--query", "x"], "");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("similarityThreshold"));

    std::fs::write(&cfg, r#"{"semanticMatching": false, "generateVis": false}"#).unwrap();
    let (code, out, _) = invoke(
        &["--data", &cars, "--config", cfg.to_str().unwrap(), "--query", "Show mpg"],
        "",
    );
    assert_eq!(code, EXIT_OK);
    let spec: Value = serde_json::from_str(out.trim()).unwrap();
    assert!(spec["visList"].as_array().unwrap().is_empty());
}

#[test]
fn repl_dialog_follows_up() {
    let housing = fixture("housing.csv");
    let script = "Show average prices for different home types over the years\n\nAs a bar chart\nJust show condos and duplexes\n:q\nnever read\n";
    let (code, out, _) = invoke(&["--data", &housing, "--repl", "--dialog"], script);
    assert_eq!(code, EXIT_OK);
    let specs: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(specs.len(), 3);
    assert_eq!(specs[0]["visList"][0]["vlSpec"]["mark"], "line");
    assert_eq!(specs[1]["visList"][0]["vlSpec"]["mark"], "bar");
    let last = &specs[2]["visList"][0]["vlSpec"];
    assert_eq!(last["transform"][0]["filter"]["field"], "House Type");
    assert_eq!(last["transform"][0]["filter"]["oneOf"], serde_json::json!(["Condo", "Duplex"]));
}

#[test]
fn repl_without_dialog_is_independent() {
    let housing = fixture("housing.csv");
    let (code, out, err) = invoke(
        &["--data", &housing, "--repl"],
        "Show average prices for different home types over the years\nAs a bar chart\n",
    );
    assert_eq!(code, EXIT_OK);
    let specs: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(specs[1]["visList"].as_array().unwrap().is_empty());
    assert!(err.contains("> "));
}

#[test]
fn binary_reads_config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(&cfg, r#"{"maxN": 0}"#).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_nl2vis"))
        .args(["--data", &fixture("cars.csv"), "--query", "Show mpg"])
        .env("NL2VIS_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(i32::from(EXIT_USAGE)));

    let ok = Command::new(env!("CARGO_BIN_EXE_nl2vis"))
        .args(["--data", &fixture("cars.csv"), "--query", "Show mpg"])
        .env_remove("NL2VIS_CONFIG")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(serde_json::from_slice::<Value>(&ok.stdout).is_ok());
}
