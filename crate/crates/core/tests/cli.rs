use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qmaxcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmaxcut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn entry<'a>(report: &'a Value, label: &str) -> &'a Value {
    report["algorithms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["label"] == label)
        .unwrap()
}

#[test]
fn solve_single_edge() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "edge.txt", "0 1\n");
    let r = json(&qmaxcut(&["solve", &path]));
    assert_eq!(r["schema"], 1);
    let ms = entry(&r, "match-singlet");
    assert!((ms["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((r["opt"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((ms["ratio_opt"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn solve_triangle_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "tri.txt", "# triangle\n0 1 1.0\n1 2\n0 2\n");
    let r = json(&qmaxcut(&["solve", &path]));
    assert!((r["sdp"]["objective"].as_f64().unwrap() - 2.25).abs() < 1e-6);
    assert!((r["opt"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert!(entry(&r, "few-qubit")["value"].as_f64().unwrap() >= 2.25 - 1e-6);

    let out = qmaxcut(&[
        "solve",
        &path,
        "--format",
        "text",
        "--algorithms",
        "tree-coloring,match-singlet",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("match-singlet") && text.contains("opt: 3.0"));
    assert!(!text.contains("gw-cut"));
}

#[test]
fn solve_writes_out_file_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "k4.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let strip = |mut v: Value| {
        for e in v["algorithms"].as_array_mut().unwrap() {
            e["wall_ms"] = Value::Null;
        }
        v
    };
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let out_path = dir.path().join(name);
        let out = qmaxcut(&[
            "solve",
            &path,
            "--seed",
            "9",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        reports.push(strip(
            serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap(),
        ));
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0]["graph"]["regularity"], "3-regular");
}

#[test]
fn bad_inputs_exit_one() {
    let out = qmaxcut(&["solve", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.txt", "0 1\n1 x\n");
    let out = qmaxcut(&["solve", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn random_instances() {
    let out = qmaxcut(&["random", "--n", "4", "--model", "regular-3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let g = qmaxcut::graph::parse_graph(&text).unwrap();
    assert_eq!((g.num_edges(), g.regular_degree()), (6, Some(3)));

    let out = qmaxcut(&["random", "--n", "5", "--model", "regular-3"]);
    assert_eq!(out.status.code(), Some(1));

    let out = qmaxcut(&[
        "random",
        "--n",
        "6",
        "--model",
        "star",
        "--weights",
        "exp",
        "--seed",
        "4",
    ]);
    let g = qmaxcut::graph::parse_graph(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!((g.num_edges(), g.degree(0)), (5, 5));

    let out = qmaxcut(&["random", "--n", "6", "--model", "wheel"]);
    assert!(!out.status.success());
}

#[test]
fn reproduce_constants() {
    let r = json(&qmaxcut(&["reproduce", "g-values"]));
    let g3 = r["degrees"][0]["g"].as_f64().unwrap();
    assert!((g3 - 1.047).abs() <= 1e-3);

    let r = json(&qmaxcut(&["reproduce", "prod2-minmax"]));
    assert!(r["minmax"][0]["min"].as_f64().unwrap() >= 0.55 - 1e-12);
    assert!(r["minmax"][1]["min"].as_f64().unwrap() >= 0.53);

    let r = json(&qmaxcut(&["reproduce", "basis-floor", "--count", "5"]));
    assert_eq!(r["basis_floor"].as_array().unwrap().len(), 5);
}
