use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycenter")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SQUARE: &str = r#"{"n":4,"vertices":[[0,0],[1,0],[1,1],[0,1]]}"#;
const KITE: &str = r#"{"n":4,"vertices":[[0,0],[2,-1],[5,0],[2,1]]}"#;
const T345: &str = r#"{"n":3,"vertices":[[0,0],[4,0],[0,3]]}"#;
const CROSSPOINT: &str = "sqrt(4*pow(d(3,4),2)*pow(d(2,4),2) - pow(pow(d(3,4),2)+pow(d(2,4),2)-pow(d(2,3),2),2)) + sqrt(4*pow(d(2,3),2)*pow(d(2,4),2) - pow(pow(d(2,3),2)+pow(d(2,4),2)-pow(d(3,4),2),2))";

#[test]
fn square_centers_all_at_middle() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let out = run(&["centers", "--in", &sq, "--all"]);
    assert!(out.status.success());
    let v = json(&out);
    let centers = v["centers"].as_array().unwrap();
    assert_eq!(centers.len(), 4);
    for c in centers {
        assert_eq!(c["point"], serde_json::json!([0.5, 0.5]), "{}", c["name"]);
    }
}

#[test]
fn kite_line_matches_expected_json() {
    let dir = TempDir::new().unwrap();
    let kite = write(&dir, "kite.json", KITE);
    let svg = dir.path().join("kite.svg");
    let out = run(&["line", "--in", &kite, "--g1", "centroid", "--g2", "simple", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"kind":"Line","point":[2.25,0],"direction":[1,0]}"#);
    let drawing = fs::read_to_string(svg).unwrap();
    assert!(drawing.starts_with("<svg") && drawing.contains("<polygon") && drawing.contains("<path"));
}

#[test]
fn seeded_am_sweep_passes_and_is_deterministic() {
    let args = ["verify", "am-collinearity", "--seed", "7", "--count", "200", "--n", "3..8"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!((v["pass"].as_u64(), v["fail"].as_u64()), (Some(200), Some(0)));
}

#[test]
fn every_suite_runs_on_generated_corpus() {
    for suite in ["fixed-set-containment", "trigon-classification", "parallelogram", "rectangle-counterexample"] {
        let v = json(&run(&["verify", suite, "--count", "30", "--seed", "3"]));
        assert_eq!(v["fail"], 0, "{suite}: {v}");
        assert_eq!(v["pass"], 30, "{suite}");
    }
}

#[test]
fn verify_reads_polygon_files() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "many.json", &format!("[{T345},{SQUARE}]"));
    let v = json(&run(&["verify", "am-collinearity", "--in", &file]));
    assert_eq!((v["pass"].as_u64(), v["fail"].as_u64()), (Some(2), Some(0)));
    let v = json(&run(&["verify", "trigon-classification", "--in", &file]));
    assert_eq!(v["fail"], 1);
    assert_eq!(v["failures"][0]["index"], 1);
}

#[test]
fn membership_square_examples() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let line = write(&dir, "line.json", r#"{"n":4,"A":[[1,-1,0,0],[0,1,-1,0]]}"#);
    let family = write(&dir, "family.json", r#"{"n":4,"A":[[0,1,0,-1],[1,-1,-1,1]]}"#);
    let w = "0.1666666666666667,0.3333333333333333,0.1666666666666667,0.3333333333333333";
    assert_eq!(json(&run(&["membership", "--in", &sq, "--line", &line, "--weights", w]))["contains"], true);
    assert_eq!(json(&run(&["membership", "--in", &sq, "--line", &family, "--weights", w]))["contains"], true);
    assert_eq!(json(&run(&["membership", "--in", &sq, "--line", &line, "--weights", "1,0,0,0"]))["contains"], false);
}

#[test]
fn symmetry_and_tangential_reports() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let v = json(&run(&["symmetry", "--in", &sq]));
    assert_eq!(v["order"], 8);
    assert_eq!(v["fixed_set"], serde_json::json!({"kind": "Point", "point": [0.5, 0.5]}));
    assert_eq!(v["central_vectors"], serde_json::json!([]));

    let t = write(&dir, "t.json", T345);
    let v = json(&run(&["tangential", "--in", &t]));
    assert_eq!(v["incircle"], serde_json::json!({"center": [1, 1], "radius": 1}));
    assert_eq!(v["tangent_lengths"], serde_json::json!([1, 3, 2]));
    assert_eq!(v["am_collinearity"]["pass"], true);

    let rect = write(&dir, "rect.json", r#"{"n":4,"vertices":[[0,0],[2,0],[2,1],[0,1]]}"#);
    let out = run(&["tangential", "--in", &rect]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "tangential");
}

#[test]
fn dsl_reports_and_errors() {
    let v = json(&run(&["dsl", "--n", "4", "--expr", CROSSPOINT, "--shape", "convex-no-three-collinear"]));
    assert_eq!(v["verified_symmetry"], true);
    assert_eq!(v["estimated_degree"], 2);

    let out = run(&["dsl", "--n", "4", "--expr", "d(1,2)"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["kind"], "symmetry");
    assert_eq!(v["witness"]["vertices"], serde_json::json!([[0, 0], [4, 0], [5, 3], [1, 2]]));

    let dir = TempDir::new().unwrap();
    let src = write(&dir, "g.txt", "d(1,3)\n");
    let kite = write(&dir, "kite.json", KITE);
    let v = json(&run(&["centers", "--in", &kite, "--expr-file", &src]));
    assert_eq!(v["centers"][0]["name"], "expr");
    assert_eq!(v["centers"][0]["point"], serde_json::json!([2.35714285714, 0]));
}

#[test]
fn malformed_input_gives_structured_errors() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [
        ("short.json", r#"{"n":2,"vertices":[[0,0],[1,0]]}"#),
        ("mismatch.json", r#"{"n":4,"vertices":[[0,0],[1,0],[1,1]]}"#),
        ("garbage.json", "not json"),
        ("wrong.json", r#"{"vertices":"x"}"#),
    ] {
        let path = write(&dir, name, body);
        let out = run(&["centers", "--in", &path]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        assert_eq!(json(&out)["kind"], "input", "{name}");
    }
    let out = run(&["centers", "--in", "/nonexistent/p.json"]);
    assert_eq!((out.status.code(), json(&out)["kind"].as_str()), (Some(1), Some("io")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["line", "--g1", "centroid"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn tolerance_override_from_environment() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let bad = Command::new(env!("CARGO_BIN_EXE_polycenter"))
        .args(["centers", "--in", &sq])
        .env("POLYCENTER_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    // With a coarse tolerance a nearly square rectangle is treated as a square.
    let near = write(&dir, "near.json", r#"{"n":4,"vertices":[[0,0],[1,0],[1,1.000001],[0,1.000001]]}"#);
    let strict = json(&run(&["symmetry", "--in", &near]));
    let loose = Command::new(env!("CARGO_BIN_EXE_polycenter"))
        .args(["symmetry", "--in", &near])
        .env("POLYCENTER_TOL", "1e-4")
        .output()
        .unwrap();
    assert_eq!(strict["order"], 4);
    assert_eq!(json(&loose)["order"], 8);
}
