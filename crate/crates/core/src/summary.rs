//! Canonical JSON summaries of built instances, shared by the CLI and the
//! browser demo.

use crate::derivation::Derivation;
use crate::error::Result;
use crate::graph::GaugeTheoryInstance;
use crate::quantize::Strategy;
use crate::symbol::GenId;
use serde_json::{json, Value};

/// Generator, differential, and bracket tables of every built level.
pub fn phase_summary(inst: &GaugeTheoryInstance) -> Value {
    let phase = &inst.phase;
    let mut levels = Vec::new();
    for level in &phase.levels {
        let alg = level.alg();
        let gens: Vec<Value> = alg
            .gens()
            .iter()
            .map(|g| {
                json!({
                    "name": g.name,
                    "cochain": g.bidegree.cochain,
                    "chain": g.bidegree.chain,
                })
            })
            .collect();
        let table = |d: &Derivation| -> Value {
            let mut map = serde_json::Map::new();
            for g in alg.gen_ids() {
                let v = d.on_gen(g);
                if !v.is_zero() {
                    map.insert(
                        alg.info(g).name.clone(),
                        json!({ "text": v.to_string(), "terms": v.to_json() }),
                    );
                }
            }
            Value::Object(map)
        };
        let bracket = &phase.brackets[level.n];
        let mut btable = serde_json::Map::new();
        for x in alg.gen_ids() {
            for y in alg.gen_ids() {
                let v = bracket.on_gens(x, y);
                if !v.is_zero() {
                    btable.insert(
                        format!("{{{}, {}}}", alg.info(x).name, alg.info(y).name),
                        json!({ "text": v.to_string(), "terms": v.to_json() }),
                    );
                }
            }
        }
        levels.push(json!({
            "level": level.n,
            "generators": gens,
            "del": table(&level.stacky.del),
            "delta": table(&level.stacky.delta),
            "poisson": Value::Object(btable),
        }));
    }
    json!({
        "graph": inst.graph.to_json(),
        "group": crate::suites::group_label(&inst.group),
        "levels": levels,
        "version": crate::report::VERSION,
    })
}

/// Normal-orders a word of hatted generators (named without the hat) in
/// the level-`n` quantized algebra and reports the result together with
/// its classical limit.
pub fn normal_order_word(
    inst: &GaugeTheoryInstance,
    level: usize,
    names: &[String],
) -> Result<Value> {
    let phase = &inst.phase;
    let q = &phase.qlevels[level.min(phase.max_level())];
    let word: Vec<GenId> = names
        .iter()
        .map(|n| {
            let hatted = format!("{}^", n);
            q.alg
                .by_name(&hatted)
                .or_else(|| q.alg.by_name(n))
                .ok_or_else(|| crate::error::CdgaError::MissingGenerator {
                    map: q.alg.name.clone(),
                    gen: n.clone(),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let nf = q.word_normal_form(&word, Strategy::LeftmostInnermost)?;
    let classical = q.classical_limit(&nf)?;
    Ok(json!({
        "word": names,
        "normal_form": { "text": nf.to_string(), "terms": nf.to_json() },
        "classical_limit": classical.to_string(),
    }))
}
