use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn rball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rball")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn two_points_give_the_lens() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "x.json", r#"{"dim": 2, "r": 1, "points": [[-0.5, 0], [0.5, 0]]}"#);
    let out = rball(&["body", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["full_disk"], false);
    assert_eq!(v["arcs"].as_array().unwrap().len(), 2);
    let mut ys: Vec<(f64, f64)> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect();
    ys.sort_by(|a, b| a.1.total_cmp(&b.1));
    let h = 3f64.sqrt() / 2.0;
    assert!(ys[0].0.abs() < 1e-12 && (ys[0].1 + h).abs() < 1e-12);
    assert!(ys[1].0.abs() < 1e-12 && (ys[1].1 - h).abs() < 1e-12);
}

#[test]
fn singleton_and_far_pair() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.json", r#"{"dim": 2, "r": 1, "points": [[0.3, 0.2]]}"#);
    let out_path = dir.path().join("disk.json");
    let out = rball(&["body", "--input", s(&one), "--output", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["full_disk"], true);

    let far = write(dir.path(), "far.json", r#"{"dim": 2, "r": 1, "points": [[-2, 0], [2, 0]]}"#);
    let out = rball(&["body", "--input", s(&far)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({"result": "empty"}));
}

#[test]
fn body_dual_and_volumes_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "x.json", r#"{"dim": 2, "r": 1, "points": [[-0.5, 0], [0.5, 0]]}"#);
    let lens = dir.path().join("lens.json");
    assert_eq!(rball(&["body", "--input", s(&input), "--output", s(&lens)]).status.code(), Some(0));
    // the dual of the lens of center gap 1 is the spindle hull of its centers
    let out = rball(&["dual", "--input", s(&lens)]);
    assert_eq!(out.status.code(), Some(0));
    let hull = rball(&["hull", "--input", s(&input)]);
    let (a, b) = (json(&out), json(&hull));
    assert_eq!(a["arcs"].as_array().unwrap().len(), b["arcs"].as_array().unwrap().len());

    let out = rball(&["volumes", "--input", s(&lens)]);
    let v = json(&out);
    let area = 2.0 * std::f64::consts::PI / 3.0 - 3f64.sqrt() / 2.0;
    assert!((v["values"][1]["value"].as_f64().unwrap() - area).abs() < 1e-12);
    assert!((v["values"][0]["value"].as_f64().unwrap() - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
}

#[test]
fn malformed_input_is_reported_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dim\": 2, \"r\": 1, \"points\": [[0, 0]");
    let out = rball(&["body", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "input");
    assert!(err["message"].as_str().unwrap().contains("malformed JSON"));

    let nan = write(dir.path(), "neg.json", r#"{"dim": 2, "r": -1, "points": [[0, 0]]}"#);
    let out = rball(&["body", "--input", s(&nan)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "domain");
}

#[test]
fn usage_errors_exit_with_two() {
    let out = rball(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "usage");

    let out = rball(&["search", "--dim", "2", "--v", "4.0", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "usage");
    assert!(err["message"].as_str().unwrap().contains("v < pi r^2"));

    assert_eq!(rball(&["verify", "product", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(rball(&["verify", "mahler2d"]).status.code(), Some(2));
    assert_eq!(rball(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_writes_jsonl_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("bs");
    let out = rball(&["verify", "bs", "--dim", "2", "--k", "2", "--trials", "1000", "--seed", "0", "--output", s(&prefix)]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("bs.csv")).unwrap();
    assert_eq!(stdout, csv);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "check,trials,violations,worst_margin,seed");
    let cols: Vec<&str> = rows[1].split(',').collect();
    assert_eq!((cols[1], cols[2], cols[4]), ("1000", "0", "0"));

    let jsonl = std::fs::read_to_string(dir.path().join("bs.jsonl")).unwrap();
    let lines: Vec<Value> = jsonl.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1001);
    assert_eq!(lines[0]["record"], "summary");
    assert_eq!(lines[0]["spec"]["seed"], 0);
    assert!(lines[1..].iter().all(|l| l["record"] == "trial"));
}

#[test]
fn verify_support_and_mahler_examples() {
    let out = rball(&["verify", "support", "--trials", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    for row in csv.lines().skip(1) {
        let worst: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(worst >= -1e-9, "{row}");
    }

    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("m");
    let out = rball(&["verify", "mahler2d", "--k", "1", "--v", "1.2284", "--trials", "200", "--output", s(&prefix)]);
    assert_eq!(out.status.code(), Some(0));
    let jsonl = std::fs::read_to_string(dir.path().join("m.jsonl")).unwrap();
    for line in jsonl.lines().skip(1) {
        let t: Value = serde_json::from_str(line).unwrap();
        if t["near_equality"] == true {
            assert_eq!(t["congruent"], true);
        }
    }
}

#[test]
fn product_violations_set_exit_code_one() {
    // planar k = 1 has non-disk equality cases, which the check reports
    let out = rball(&["verify", "product", "--k", "1", "--trials", "1000", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let csv = String::from_utf8(out.stdout).unwrap();
    let cols: Vec<String> = csv.lines().nth(1).unwrap().split(',').map(String::from).collect();
    assert_ne!(cols[2], "0");
    let worst: f64 = cols[3].parse().unwrap();
    assert!(worst >= 0.0);
}

#[test]
fn planar_search_matches_the_lens_and_draws_it() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("best.svg");
    let args = ["search", "--dim", "2", "--k", "1", "--r", "1", "--v", "1.228369", "--n", "4", "--restarts", "20", "--seed", "0"];
    let mut with_svg = args.to_vec();
    with_svg.extend(["--svg", s(&svg)]);
    let out = rball(&with_svg);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["gap"].as_f64().unwrap().abs() <= 1e-6);
    assert_eq!(v["exploratory"], false);
    let pic = std::fs::read_to_string(&svg).unwrap();
    for id in ["reference-ball", "body", "dual", "lens-baseline"] {
        assert!(pic.contains(&format!("id=\"{id}\"")), "{id}");
    }
    // reruns from the recorded seed are identical
    let again = rball(&args);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn spatial_search_is_exploratory() {
    let out = rball(&[
        "search", "--dim", "3", "--k", "3", "--r", "1", "--v", "1.0", "--n", "3", "--seed", "0", "--restarts", "1",
        "--max-evals", "40", "--quadrature", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["exploratory"], true);
    assert!(v.get("optimal").is_none());
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn spatial_body_records_seeds_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "x3.json", r#"{"dim": 3, "r": 1, "points": [[-0.5, 0, 0], [0.5, 0, 0], [0, 0.4, 0.1]]}"#);
    let args = ["body", "--input", s(&input), "--samples", "20000", "--directions", "200", "--seed", "7"];
    let out = rball(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"], "body");
    assert_eq!(v["volume"]["seed"], 7);
    assert_eq!(v["volume"]["samples"], 20000);
    assert!(v["volume"]["value"].as_f64().unwrap() > 0.0);
    assert_eq!(out.stdout, rball(&args).stdout);

    let hull = rball(&["hull", "--input", s(&input), "--samples", "20000", "--directions", "200"]);
    assert_eq!(hull.status.code(), Some(0));
    let h = json(&hull);
    assert_eq!(h["result"], "hull");
    assert!(h["volume"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn dual_of_a_point_needs_a_radius() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"result": "point", "point": [0.1, 0.2]}"#);
    assert_eq!(rball(&["dual", "--input", s(&p)]).status.code(), Some(2));
    let out = rball(&["dual", "--input", s(&p), "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["full_disk"], true);
}
