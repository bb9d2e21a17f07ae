//! Browser bindings for the interactive demo page (`www/index.html`).
//!
//! Each export takes and returns JSON strings so the page needs no copied
//! type definitions. Errors come back as `{"error": "..."}` objects
//! rather than exceptions.
//!
//! Build with `wasm-pack build crates/wasm --target web --out-dir www/pkg`
//! and serve `crates/wasm/www/`.

use tstar_core::graph::{build_phase_space, catalog, DirectedGraph};
use tstar_core::hopf::GroupKind;
use tstar_core::quantize::{endo_homology_point, point_weight_triple, validate_triple};
use tstar_core::suites;
use wasm_bindgen::prelude::*;

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

fn parse_group(s: &str) -> Result<GroupKind, String> {
    match s {
        "sl2" => Ok(GroupKind::Sl2),
        "torus" | "torus:1" => Ok(GroupKind::Torus { rank: 1 }),
        "torus:2" => Ok(GroupKind::Torus { rank: 2 }),
        "torus:3" => Ok(GroupKind::Torus { rank: 3 }),
        _ => Err(format!("unknown group `{}`", s)),
    }
}

fn parse_graph(graph_json: &str) -> Result<DirectedGraph, String> {
    let v: serde_json::Value = serde_json::from_str(graph_json).map_err(|e| e.to_string())?;
    DirectedGraph::from_json(&v).map_err(|e| e.to_string())
}

/// The built-in graph catalog, for the demo's dropdown.
#[wasm_bindgen]
pub fn catalog_graphs() -> String {
    let entries: Vec<serde_json::Value> = catalog()
        .into_iter()
        .map(|(name, g)| serde_json::json!({ "name": name, "graph": g.to_json() }))
        .collect();
    serde_json::Value::Array(entries).to_string()
}

/// Builds a phase space and returns its generator, differential, and
/// Poisson tables for all levels up to `level`.
#[wasm_bindgen]
pub fn build_summary(graph_json: &str, group: &str, level: usize) -> String {
    let run = || -> Result<String, String> {
        let graph = parse_graph(graph_json)?;
        let group = parse_group(group)?;
        let inst = build_phase_space(&graph, &group, level.min(2)).map_err(|e| e.to_string())?;
        Ok(tstar_core::summary::phase_summary(&inst).to_string())
    };
    run().unwrap_or_else(err_json)
}

/// Normal-orders a word of generators (comma-separated names, unhatted)
/// in the level-`level` quantized algebra.
#[wasm_bindgen]
pub fn normal_order(graph_json: &str, group: &str, level: usize, word: &str) -> String {
    let run = || -> Result<String, String> {
        let graph = parse_graph(graph_json)?;
        let group = parse_group(group)?;
        let inst = build_phase_space(&graph, &group, level.min(2)).map_err(|e| e.to_string())?;
        let names: Vec<String> = word
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let doc = tstar_core::summary::normal_order_word(&inst, level, &names)
            .map_err(|e| e.to_string())?;
        Ok(doc.to_string())
    };
    run().unwrap_or_else(err_json)
}

/// Runs the verification suites for one instance and reports pass/fail
/// per check.
#[wasm_bindgen]
pub fn verify_instance(graph_json: &str, group: &str, level: usize) -> String {
    let run = || -> Result<String, String> {
        let graph = parse_graph(graph_json)?;
        let group = parse_group(group)?;
        let inst = build_phase_space(&graph, &group, level.min(2)).map_err(|e| e.to_string())?;
        let mut checks = Vec::new();
        checks.push(("resolution", suites::resolution_checks(&inst).map_err(|e| e.to_string())?));
        checks.push(("poisson", suites::poisson_checks(&inst, 7).map_err(|e| e.to_string())?));
        checks.push(("quantize", suites::quantize_checks(&inst, 7).map_err(|e| e.to_string())?));
        let rows: Vec<serde_json::Value> = checks
            .into_iter()
            .map(|(name, witness)| {
                serde_json::json!({
                    "suite": name,
                    "status": if witness.is_none() { "pass" } else { "fail" },
                    "witness": witness,
                })
            })
            .collect();
        Ok(serde_json::Value::Array(rows).to_string())
    };
    run().unwrap_or_else(err_json)
}

/// Weight objects over the point: validation plus endomorphism homology
/// per weight.
#[wasm_bindgen]
pub fn gm_homology(weights_json: &str) -> String {
    let run = || -> Result<String, String> {
        let weights: Vec<i64> =
            serde_json::from_str(weights_json).map_err(|e| e.to_string())?;
        let point = DirectedGraph::new(&["v1"], &[]).map_err(|e| e.to_string())?;
        let inst = build_phase_space(&point, &GroupKind::Torus { rank: 1 }, 0)
            .map_err(|e| e.to_string())?;
        let mut rows = Vec::new();
        for n in weights {
            let t = point_weight_triple(&inst.phase, n).map_err(|e| e.to_string())?;
            let valid = validate_triple(&t).map_err(|e| e.to_string())?;
            let hom = endo_homology_point(&t).map_err(|e| e.to_string())?;
            rows.push(serde_json::json!({
                "weight": n,
                "valid": valid.passed(),
                "homology": hom.iter().map(|h| serde_json::json!({
                    "degree": h.degree,
                    "free_rank": h.free_rank,
                    "torsion": h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }));
        }
        Ok(serde_json::Value::Array(rows).to_string())
    };
    run().unwrap_or_else(err_json)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_run_natively() {
        let graphs = catalog_graphs();
        assert!(graphs.contains("triangle"));
        let edge = r#"{"vertices":["v1","v2"],"edges":[{"id":"e1","src":"v1","tgt":"v2"}]}"#;
        let summary = build_summary(edge, "torus:1", 1);
        assert!(summary.contains("\"del\""), "{}", summary);
        let nf = normal_order(edge, "torus:1", 0, "p_t_e1, x_e1");
        assert!(nf.contains("normal_form"), "{}", nf);
        let hom = gm_homology("[0, 2]");
        assert!(hom.contains("torsion"), "{}", hom);
        let verify = verify_instance(edge, "torus:1", 1);
        assert!(verify.contains("pass"), "{}", verify);
        let bad = build_summary("{", "torus:1", 0);
        assert!(bad.contains("error"));
    }
}
