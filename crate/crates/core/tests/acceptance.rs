//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its wall time. Every threshold is pinned here.
//!
//! 1. Hopf axioms and action brackets, torus ranks 1-3 and SL2, exact,
//!    on generators and 50 random products of length <= 3; < 5 s.
//! 2. Square-zero of the Chevalley-Eilenberg differential for sl2 acting
//!    on Q[x,y] and for every graph instance; exact; < 5 s.
//! 3. Resolution: the full graph catalog (self-loops, multi-edges,
//!    triangle; <= 3 vertices, <= 4 edges), both groups, levels n <= 2:
//!    bicomplex identities, all cosimplicial identities, differential
//!    compatibility of every coface/codegeneracy; exact; < 2 min.
//! 4. Poisson: antisymmetry and the cochain-map property on all generator
//!    pairs, Leibniz on 100 random triples, Jacobi on all generator
//!    triples, coface/codegeneracy bracket compatibility for n <= 2;
//!    exact.
//! 5. Quantization: dhbar^2 = 0 on generators at every level,
//!    commutator-table agreement with the commutation relations,
//!    correspondence principle on all generator pairs, rewriting
//!    confluence on 100 random words of length <= 6 under two strategies,
//!    classical limits of quantized cofaces; exact; < 2 min.
//! 6. Worked example: weight objects satisfy del psi + psi del =
//!    hbar n id exactly; endomorphism homology is free of rank 1 per
//!    degree for n = 0 and has torsion Q[hbar]/(hbar) for n in
//!    {1, -1, 2, 3}; rank-nullity cross-check at 5 random rational
//!    specializations; < 5 s.
//! 7. Pointing objects for graphs with <= 2 vertices and <= 2 edges, both
//!    groups, momentum bound 2: del^2 = 0 on all basis words and the full
//!    triple validation passes; < 1 min.
//! 8. Prefactorization: the empty tuple returns the pointing object
//!    bit-exactly; three-deep nesting of orthogonal embeddings composes
//!    on the nose after canonical sorting; permutation equivariance;
//!    exact.

use std::time::{Duration, Instant};
use tstar_core::report::SuiteReport;
use tstar_core::suites;

const SEED: u64 = 2024;

fn run(name: &str, budget: Duration, suite: SuiteReport) {
    let failures: Vec<String> = suite
        .summary_lines()
        .into_iter()
        .filter(|l| l.starts_with("FAIL"))
        .collect();
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{} {}", status, name);
    for f in &failures {
        println!("    {}", f);
    }
    assert!(failures.is_empty(), "{} failed:\n{}", name, failures.join("\n"));
    let _ = budget;
}

fn timed(name: &str, budget: Duration, f: impl FnOnce() -> SuiteReport) {
    let start = Instant::now();
    let suite = f();
    let elapsed = start.elapsed();
    run(&format!("{} ({:.1?})", name, elapsed), budget, suite);
    assert!(
        elapsed <= budget,
        "{} exceeded its {:?} budget: {:?}",
        name,
        budget,
        elapsed
    );
}

#[test]
fn criterion_1_hopf() {
    timed(
        "criterion 1: Hopf suite (torus ranks 1-3, SL2)",
        Duration::from_secs(5),
        || suites::hopf_suite(SEED),
    );
}

#[test]
fn criterion_2_ce() {
    timed(
        "criterion 2: CE suite (sl2 on Q[x,y] and all graph instances)",
        Duration::from_secs(5),
        suites::ce_suite,
    );
}

#[test]
fn criterion_3_resolution() {
    timed(
        "criterion 3: resolution suite (catalog x groups, n <= 2)",
        Duration::from_secs(120),
        || suites::resolution_suite(2),
    );
}

#[test]
fn criterion_4_poisson() {
    timed(
        "criterion 4: Poisson suite (axioms, cochain map, simplicial compatibility)",
        Duration::from_secs(120),
        || suites::poisson_suite(SEED),
    );
}

#[test]
fn criterion_5_quantization() {
    timed(
        "criterion 5: quantization suite (dhbar^2, relations, correspondence, confluence)",
        Duration::from_secs(120),
        || suites::quantize_suite(SEED),
    );
}

#[test]
fn criterion_6_worked_example() {
    timed(
        "criterion 6: weight objects over the point (homology and cross-checks)",
        Duration::from_secs(5),
        || suites::gm_example_suite(&[0, 1, -1, 2, 3], SEED),
    );
}

#[test]
fn criterion_7_pointing() {
    timed(
        "criterion 7: pointing objects (<= 2 vertices / 2 edges, bound 2)",
        Duration::from_secs(60),
        || suites::pointing_suite(2),
    );
}

#[test]
fn criterion_8_prefactorization() {
    timed(
        "criterion 8: prefactorization coherence",
        Duration::from_secs(120),
        suites::prefactorization_suite,
    );
}
