//! Exit-code contract and determinism of the command-line front end.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tstar"))
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("tstar-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn edge_graph_json() -> PathBuf {
    write_tmp(
        "edge.json",
        r#"{"vertices": ["v1", "v2"], "edges": [{"id": "e1", "src": "v1", "tgt": "v2"}]}"#,
    )
}

#[test]
fn build_emits_gauss_constraint() {
    let graph = edge_graph_json();
    let out = bin()
        .args(["build", "--graph"])
        .arg(&graph)
        .args(["--group", "torus:1", "--level", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // del(t_v1) = -p_e1
    let del = &doc["levels"][0]["del"]["t_t_v1"];
    assert_eq!(del["text"], "-p_t_e1");
    assert_eq!(del["terms"][0]["monomial"][0][0], "p_t_e1");
    assert_eq!(del["terms"][0]["coeff"][0], serde_json::json!([0, -1, 1]));
}

#[test]
fn malformed_graph_is_exit_2() {
    let graph = write_tmp(
        "bad.json",
        r#"{"vertices": ["v1"], "edges": [{"id": "e1", "src": "v1", "tgt": "nope"}]}"#,
    );
    let out = bin().args(["build", "--graph"]).arg(&graph).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown vertex"), "stderr: {}", err);
}

#[test]
fn empty_suite_selection_is_empty_pass() {
    let out = bin()
        .args(["verify", "--suite", "", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["suites"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_hopf_passes_and_is_deterministic() {
    let run = || {
        let out = bin()
            .args(["verify", "--suite", "hopf,gm", "--seed", "11"])
            .env("TSTAR_WORKERS", "2")
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "report bytes must match for a fixed (config, seed)");
}

#[test]
fn verify_custom_graph_group_json() {
    let graph = edge_graph_json();
    let out = bin()
        .args(["verify", "--graph"])
        .arg(&graph)
        .args([
            "--group",
            r#"{"type":"torus","rank":1}"#,
            "--level",
            "1",
            "--suite",
            "resolution,poisson",
            "--seed",
            "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn example_gm_reports_torsion() {
    let out = bin().args(["example-gm", "0", "1", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let table = doc["homology_table"].as_array().unwrap();
    assert_eq!(table.len(), 3);
    // weight 0: free rank 1 in both degrees
    let h0 = table[0]["endomorphism_homology"].as_array().unwrap();
    assert!(h0.iter().all(|h| h["free_rank"] == 1));
    // weights 1 and 3: torsion h in one degree
    for row in &table[1..] {
        let hs = row["endomorphism_homology"].as_array().unwrap();
        let torsion: Vec<_> = hs
            .iter()
            .filter(|h| !h["torsion"].as_array().unwrap().is_empty())
            .collect();
        assert_eq!(torsion.len(), 1);
        assert_eq!(torsion[0]["torsion"][0], "h");
    }
}

#[cfg(feature = "fault-injection")]
#[test]
fn fault_injection_reports_jacobi_failure() {
    let out = bin()
        .args(["verify", "--suite", "", "--inject-fault"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = doc.to_string();
    assert!(text.contains("jacobi") || text.contains("Jacobi"), "{}", text);
}
