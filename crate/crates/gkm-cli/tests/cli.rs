//! End-to-end tests of the installed binary: exit codes, determinism of the
//! output bytes, and JSON outputs that parse back into the structures they
//! describe.

use std::path::PathBuf;
use std::process::{Command, Output};

fn gkmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkmlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("gkmlab_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn package_passes_on_the_permutahedron() {
    let out = gkmlab(&["package", "--graph", "sn:3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: PASS"));
    assert!(text.contains("tau[321]"));
}

#[test]
fn cohdim_reports_the_known_dimensions() {
    let out = gkmlab(&[
        "cohdim",
        "--graph",
        "sn:3",
        "--max-degree",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dims: Vec<u64> = v["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 4, 9, 15, 21]);
}

#[test]
fn byte_identical_output_across_runs() {
    for args in [
        vec!["morse", "--graph", "sn:3", "--format", "json"],
        vec!["package", "--graph", "johnson:3,2"],
        vec!["appendix-check", "--max-m", "3", "--seed", "5"],
        vec!["cross-section", "--graph", "sn:3", "--level", "3/2"],
    ] {
        let a = gkmlab(&args);
        let b = gkmlab(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn axiom_failure_exits_one() {
    // two parallel labels at a shared vertex: A1 fails, a mathematical
    // negative rather than a malformed input
    let path = tmp("parallel.json");
    std::fs::write(
        &path,
        serde_json::json!({
            "dim": 2, "basis": ["a", "b"],
            "vertices": ["p", "q", "r", "t"],
            "edges": [
                {"src": "p", "dst": "q", "alpha": ["1", "0"]},
                {"src": "q", "dst": "r", "alpha": ["2", "0"]},
                {"src": "r", "dst": "t", "alpha": ["0", "1"]},
                {"src": "t", "dst": "p", "alpha": ["0", "1"]},
            ],
        })
        .to_string(),
    )
    .unwrap();
    let arg = format!("file:{}", path.display());
    let out = gkmlab(&["validate", "--graph", &arg]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
}

#[test]
fn input_errors_exit_two() {
    let out = gkmlab(&["validate", "--graph", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gkmlab(&["validate", "--graph", "file:/does/not/exist.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gkmlab(&["cross-section", "--graph", "sn:3", "--level", "0/0"]);
    assert_eq!(out.status.code(), Some(2));
    // a critical level is rejected as input
    let out = gkmlab(&["cross-section", "--graph", "sn:3", "--level", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cut_emits_a_loadable_skeleton() {
    let path = tmp("product.json");
    let out = gkmlab(&[
        "cut",
        "--graph",
        "johnson:3,2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let loaded = gkm_core::catalog::load(&path).unwrap();
    assert_eq!(loaded.n_vertices(), 6);
    assert_eq!(loaded.valence(), 3);
    // the emitted product is itself a valid graph for the tool
    let arg = format!("file:{}", path.display());
    let out = gkmlab(&["validate", "--graph", &arg]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn integrate_a_class_file() {
    // the top generating class integrates to the constant 1
    let g = gkm_core::catalog::cayley_sn(3).unwrap();
    let md = gkm_core::morse::morse_data(&g.skeleton, &g.xi).unwrap();
    let top = g.skeleton.vertex_id("321").unwrap();
    let class = gkm_core::cohomology::generating_class(&g.skeleton, &md, top).unwrap();
    let path = tmp("top_class.json");
    std::fs::write(
        &path,
        class.class.to_json(&g.skeleton).to_string(),
    )
    .unwrap();
    let out = gkmlab(&[
        "integrate",
        "--graph",
        "sn:3",
        "--class",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("polynomial"));

    // the same class file restricts and passes membership at a level
    let out = gkmlab(&[
        "cross-section",
        "--graph",
        "sn:3",
        "--level",
        "5/2",
        "--class",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["membership"]["ok"], serde_json::Value::Bool(true));
}

#[test]
fn sweep_prints_running_dimensions() {
    let out = gkmlab(&[
        "sweep",
        "--graph",
        "sn:3",
        "--degree",
        "2",
        "--verify",
        "dims",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total"], serde_json::json!(9));
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
}
