//! Command-line front end.
//!
//! Exit code contract: 0 all-pass, 1 verification failure, 2 input error.
//! Output is canonical JSON (sorted keys) and is byte-identical for a
//! fixed (config, seed): suites run on a small worker pool but results
//! are collected by name, not completion order. `TSTAR_WORKERS` bounds
//! the pool.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use tstar_core::graph::{build_phase_space, DirectedGraph};
use tstar_core::hopf::GroupKind;
use tstar_core::json::to_canonical_string;
use tstar_core::report::{Report, SuiteReport};
use tstar_core::suites;

#[derive(Parser)]
#[command(name = "tstar", version, about = "Phase spaces and quantizations of gauge theories on directed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Builds a phase space and emits its generator, differential, and
    /// bracket tables as canonical JSON.
    Build {
        /// Graph JSON file: {"vertices": [...], "edges": [{"id","src","tgt"}...]}
        #[arg(long)]
        graph: PathBuf,
        /// Group: `torus:K`, `sl2`, or JSON like {"type":"torus","rank":2}
        #[arg(long, default_value = "torus:1")]
        group: String,
        /// Maximum cosimplicial level
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs verification suites and emits a report.
    Verify {
        /// Graph JSON file for the instance-specific suites (defaults to
        /// the built-in catalog shapes)
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value = "torus:1")]
        group: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Momentum-degree bound for pointing objects
        #[arg(long, default_value_t = 2)]
        bound: usize,
        /// Comma-separated suite selection:
        /// hopf,ce,resolution,poisson,quantize,gm,pointing,prefactorization
        #[arg(long, value_delimiter = ',')]
        suite: Option<Vec<String>>,
        /// Seed for the randomized smoke checks
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Test hook: corrupt an sl2 structure constant and report the
        /// resulting Jacobi failure (build with `--features fault-injection`)
        #[cfg(feature = "fault-injection")]
        #[arg(long, default_value_t = false)]
        inject_fault: bool,
    },
    /// Builds the torus weight objects over a point and prints their
    /// endomorphism homology.
    ExampleGm {
        /// Weights (empty list prints an empty table)
        weights: Vec<i64>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_group(s: &str) -> Result<GroupKind, String> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| format!("group JSON: {}", e))?;
        return match v["type"].as_str() {
            Some("torus") => {
                let rank = v["rank"].as_u64().unwrap_or(1) as usize;
                if rank == 0 {
                    return Err("torus rank must be positive".into());
                }
                Ok(GroupKind::Torus { rank })
            }
            Some("sl2") => Ok(GroupKind::Sl2),
            _ => Err(format!("unknown group type in `{}`", s)),
        };
    }
    if s == "sl2" {
        return Ok(GroupKind::Sl2);
    }
    if let Some(rank) = s.strip_prefix("torus:") {
        let rank: usize = rank.parse().map_err(|_| format!("bad torus rank `{}`", rank))?;
        if rank == 0 {
            return Err("torus rank must be positive".into());
        }
        return Ok(GroupKind::Torus { rank });
    }
    if s == "torus" {
        return Ok(GroupKind::Torus { rank: 1 });
    }
    Err(format!("unknown group `{}` (expected torus:K or sl2)", s))
}

fn load_graph(path: &PathBuf) -> Result<DirectedGraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e))?;
    DirectedGraph::from_json(&v).map_err(|e| format!("{}: {}", path.display(), e))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("write {}: {}", path.display(), e)),
        None => {
            println!("{}", text);
            Ok(())
        }
    }
}

fn cmd_build(graph: PathBuf, group: String, level: usize, out: Option<PathBuf>) -> Result<bool, String> {
    let graph = load_graph(&graph)?;
    let group = parse_group(&group)?;
    let inst = build_phase_space(&graph, &group, level).map_err(|e| e.to_string())?;
    let doc = tstar_core::summary::phase_summary(&inst);
    emit(&out, &to_canonical_string(&doc))?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    graph: Option<PathBuf>,
    group: String,
    level: usize,
    bound: usize,
    suite: Option<Vec<String>>,
    seed: u64,
    out: Option<PathBuf>,
    inject_fault: bool,
) -> Result<bool, String> {
    let group = parse_group(&group)?;
    let custom_graph = match &graph {
        Some(p) => Some(load_graph(p)?),
        None => None,
    };

    let all = [
        "hopf",
        "ce",
        "resolution",
        "poisson",
        "quantize",
        "gm",
        "pointing",
        "prefactorization",
    ];
    let selected: Vec<String> = match suite {
        None => all.iter().map(|s| s.to_string()).collect(),
        Some(list) => {
            let list: Vec<String> = list.into_iter().filter(|s| !s.is_empty()).collect();
            for s in &list {
                if !all.contains(&s.as_str()) {
                    return Err(format!("unknown suite `{}`", s));
                }
            }
            list
        }
    };

    // one closure per selected suite, dispatched to a bounded worker pool
    type Job = Box<dyn FnOnce() -> SuiteReport + Send>;
    let mut jobs: Vec<(String, Job)> = Vec::new();
    for name in &selected {
        let name = name.clone();
        let group = group.clone();
        let custom = custom_graph.clone();
        let job: Job = match name.as_str() {
            "hopf" => Box::new(move || suites::hopf_suite(seed)),
            "ce" => Box::new(suites::ce_suite),
            "resolution" => Box::new(move || match custom {
                None => suites::resolution_suite(level),
                Some(g) => {
                    let mut r = SuiteReport::new("resolution");
                    r.check("custom/levels", || {
                        let inst = suites::instance(&g, &group, level)?;
                        suites::resolution_checks(&inst)
                    });
                    r
                }
            }),
            "poisson" => Box::new(move || match custom {
                None => suites::poisson_suite(seed),
                Some(g) => {
                    let mut r = SuiteReport::new("poisson");
                    r.check("custom/bracket-axioms", || {
                        let inst = suites::instance(&g, &group, level)?;
                        suites::poisson_checks(&inst, seed)
                    });
                    r
                }
            }),
            "quantize" => Box::new(move || match custom {
                None => suites::quantize_suite(seed),
                Some(g) => {
                    let mut r = SuiteReport::new("quantize");
                    r.check("custom/quantization", || {
                        let inst = suites::instance(&g, &group, level)?;
                        suites::quantize_checks(&inst, seed)
                    });
                    r
                }
            }),
            "gm" => Box::new(move || suites::gm_example_suite(&[0, 1, -1, 2, 3], seed)),
            "pointing" => Box::new(move || suites::pointing_suite(bound)),
            "prefactorization" => Box::new(|| suites::prefactorization_suite()),
            _ => unreachable!(),
        };
        jobs.push((name, job));
    }
    if inject_fault {
        jobs.push((
            "fault-injection".into(),
            Box::new(|| fault_injection_suite()),
        ));
    }

    let workers: usize = std::env::var("TSTAR_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));

    let mut reports: Vec<SuiteReport> = Vec::new();
    let mut queue = jobs;
    while !queue.is_empty() {
        let batch: Vec<(String, Job)> = queue
            .drain(..queue.len().min(workers))
            .collect();
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = batch
                .into_iter()
                .map(|(name, job)| (name, scope.spawn(job)))
                .collect();
            handles
                .into_iter()
                .map(|(name, h)| (name, h.join().expect("suite thread panicked")))
                .collect::<Vec<_>>()
        });
        for (_, r) in results {
            reports.push(r);
        }
    }

    let report = Report { suites: reports };
    for suite in &report.suites {
        for line in suite.summary_lines() {
            eprintln!("{}", line);
        }
    }
    emit(&out, &to_canonical_string(&report.to_json()))?;
    Ok(report.passed())
}

/// Deliberately corrupts an sl2 structure constant and reports the
/// resulting Jacobi failure with its witness triple. Compiled only with
/// the `fault-injection` feature and reached only through the hidden flag.
fn fault_injection_suite() -> SuiteReport {
    use tstar_core::ce::AbstractLie;
    use tstar_core::scalar::rat_int;
    let mut report = SuiteReport::new("fault-injection");
    report.check("corrupted-structure-constants", || {
        let r = |v: i64| rat_int(v);
        // [h,e] = 2e but [e,f] = 2h breaks the Jacobi identity
        let bad = AbstractLie::new(
            vec!["e".into(), "h".into(), "f".into()],
            &[
                ((1, 0), vec![(0, r(2))]),
                ((0, 1), vec![(0, r(-2))]),
                ((1, 2), vec![(2, r(-2))]),
                ((2, 1), vec![(2, r(2))]),
                ((0, 2), vec![(1, r(2))]),
                ((2, 0), vec![(1, r(-2))]),
            ],
        );
        match bad {
            Err(e) => Ok(Some(format!("detected as expected: {}", e))),
            Ok(_) => Ok(Some("corruption NOT detected".into())),
        }
    });
    report
}

fn cmd_example_gm(weights: Vec<i64>, seed: u64, out: Option<PathBuf>) -> Result<bool, String> {
    let report = suites::gm_example_suite(&weights, seed);
    let point = DirectedGraph::new(&["v1"], &[]).map_err(|e| e.to_string())?;
    let inst = suites::instance(&point, &GroupKind::Torus { rank: 1 }, 0)
        .map_err(|e| e.to_string())?;
    let mut table = Vec::new();
    for &n in &weights {
        let t = tstar_core::quantize::point_weight_triple(&inst.phase, n)
            .map_err(|e| e.to_string())?;
        let hom = tstar_core::quantize::endo_homology_point(&t).map_err(|e| e.to_string())?;
        table.push(json!({
            "weight": n,
            "endomorphism_homology": hom.iter().map(|h| json!({
                "degree": h.degree,
                "free_rank": h.free_rank,
                "torsion": h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }));
    }
    let doc = json!({
        "report": report.to_json(),
        "homology_table": table,
        "version": tstar_core::report::VERSION,
    });
    for line in report.summary_lines() {
        eprintln!("{}", line);
    }
    emit(&out, &to_canonical_string(&doc))?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build { graph, group, level, out } => cmd_build(graph, group, level, out),
        Command::Verify {
            graph,
            group,
            level,
            bound,
            suite,
            seed,
            out,
            #[cfg(feature = "fault-injection")]
            inject_fault,
        } => {
            #[cfg(not(feature = "fault-injection"))]
            let inject_fault = false;
            cmd_verify(graph, group, level, bound, suite, seed, out, inject_fault)
        }
        Command::ExampleGm { weights, seed, out } => cmd_example_gm(weights, seed, out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
