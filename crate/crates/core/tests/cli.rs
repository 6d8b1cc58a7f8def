//! End-to-end runs of the command-line binary.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(f: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/cli").join(f).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_punctured-skein")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn resolving_the_empty_curve_gives_the_edge() {
    let (code, doc, _) =
        run(&["resolve", "--tri", &data("tet.json"), "--edge", "0", "--curve", &data("empty.json"), "--negative"]);
    assert_eq!(code, 0);
    assert_eq!(doc["negative"]["coefficient"]["[0,0,0,0]"], "1");
    let edge: Value = serde_json::from_str(&std::fs::read_to_string(data("edge0.json")).unwrap()).unwrap();
    assert_eq!(doc["negative"]["curve"], edge);
    assert!(doc.get("positive").is_none());
}

#[test]
fn ptolemy_multiplication() {
    let (code, doc, _) = run(&[
        "multiply",
        "--tri",
        &data("square.json"),
        "--elem",
        &data("diagonal1.json"),
        "--elem",
        &data("diagonal2.json"),
    ]);
    assert_eq!(code, 0);
    let terms = doc["product"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    for t in terms {
        assert_eq!(t["coeff"]["value"], "1");
        assert_eq!(t["coeff"]["v_exponents"], serde_json::json!([0, 0, 0, 0]));
    }
}

#[test]
fn exhaustive_resolution_suite_passes() {
    let (code, doc, _) = run(&["verify", "--tri", &data("tet.json"), "--suite", "resolutions", "--max-corner", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["suite"], "resolutions");
    assert_eq!(doc["failure_count"], 0);
}

#[test]
fn quantum_product_carries_a_q_slot() {
    let (code, doc, _) = run(&[
        "multiply",
        "--quantum",
        "--tri",
        &data("tet.json"),
        "--elem",
        &data("diagonal1.json"),
        "--elem",
        &data("diagonal2.json"),
    ]);
    assert_eq!(code, 0);
    for t in doc["product"].as_array().unwrap() {
        assert_eq!(t["coeff"]["v_exponents"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn expansion_of_the_flip_arc_is_the_ptolemy_ratio() {
    let (code, doc, _) = run(&["expand", "--tri", &data("tet.json"), "--curve", &data("flip0.json")]);
    assert_eq!(code, 0);
    let e = doc["expansion"].as_object().unwrap();
    assert_eq!(e.len(), 2);
    assert!(e.keys().all(|k| k.starts_with("[-1,")));
}

#[test]
fn invalid_curves_are_domain_errors() {
    let (code, doc, _) = run(&["validate", "--tri", &data("tet.json"), "--curve", &data("invalid.json")]);
    assert_eq!(code, 1);
    assert_eq!(doc["results"][0]["violation"]["condition"], 7);
    let (code, _, err) = run(&["resolve", "--tri", &data("tet.json"), "--edge", "0", "--curve", &data("invalid.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("condition (7)"));
}

#[test]
fn negative_vertex_exponents_are_rejected_by_expand() {
    let dir = std::env::temp_dir().join(format!("punctured-skein-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inverse_vertex.json");
    std::fs::write(
        &path,
        r#"[{"coeff": {"v_exponents": [-1, 0, 0, 0], "value": "1"}, "curve": {"corners": [0,0,0,0,0,0,0,0,0,0,0,0]}}]"#,
    )
    .unwrap();
    let (code, _, err) = run(&["expand", "--tri", &data("tet.json"), "--elem", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("nonnegative vertex exponents"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["multiply", "--tri", &data("tet.json")]).0, 2);
    assert_eq!(run(&["verify", "--tri", &data("tet.json"), "--suite", "quantum"]).0, 2);
    assert_eq!(run(&["verify", "--tri", &data("tet.json"), "--suite", "nosuch", "--seed", "1"]).0, 2);
    assert_eq!(run(&["bracket", "--tri", &data("tet.json"), "--elem", &data("diagonal1.json")]).0, 2);
}

#[test]
fn missing_files_are_domain_errors() {
    let (code, _, err) = run(&["enumerate", "--tri", "/nonexistent/tri.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/tri.json"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let base =
        ["bracket", "--tri", &data("tet.json"), "--elem", &data("diagonal1.json"), "--elem", &data("diagonal2.json")];
    let outs: Vec<_> = ["1", "3"]
        .iter()
        .map(|t| {
            let mut a = base.to_vec();
            a.extend(["--threads", t]);
            Command::new(env!("CARGO_BIN_EXE_punctured-skein")).args(&a).output().unwrap().stdout
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn enumeration_counts() {
    let (code, doc, _) = run(&["enumerate", "--tri", &data("tet.json"), "--max-corner", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["count"], 19);
    let (_, doc, _) = run(&["enumerate", "--tri", &data("tet.json"), "--max-corner", "1"]);
    assert_eq!(doc["count"], 37);
}
