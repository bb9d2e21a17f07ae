//! Machine-readable verification reports.
//!
//! Reports are deterministic for a fixed (config, seed): checks are keyed
//! by name and serialized in sorted order regardless of execution order,
//! so dispatching suites to worker threads cannot perturb the output.

use serde_json::{json, Value};
use std::time::Instant;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
    pub millis: u128,
}

impl Check {
    /// Timing is reported on stderr only: the JSON report must be
    /// byte-identical for a fixed (config, seed).
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "status": if self.status == Status::Pass { "pass" } else { "fail" },
            "witness": self.witness,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    /// Runs a check body returning `Ok(None)` for pass or `Ok(witness)`.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        body: impl FnOnce() -> crate::error::Result<Option<String>>,
    ) {
        let start = Instant::now();
        let (status, witness) = match body() {
            Ok(None) => (Status::Pass, None),
            Ok(Some(w)) => (Status::Fail, Some(w)),
            Err(e) => (Status::Fail, Some(format!("error: {}", e))),
        };
        self.checks.push(Check {
            name: name.into(),
            status,
            witness,
            millis: start.elapsed().as_millis(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> Value {
        let mut checks = self.checks.clone();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        json!({
            "suite": self.suite,
            "status": if self.passed() { "pass" } else { "fail" },
            "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut checks = self.checks.clone();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        checks
            .iter()
            .map(|c| {
                let mark = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                match &c.witness {
                    Some(w) => {
                        format!("{} {}::{} [{}ms] ({})", mark, self.suite, c.name, c.millis, w)
                    }
                    None => format!("{} {}::{} [{}ms]", mark, self.suite, c.name, c.millis),
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }

    pub fn to_json(&self) -> Value {
        let mut suites = self.suites.clone();
        suites.sort_by(|a, b| a.suite.cmp(&b.suite));
        json!({
            "version": VERSION,
            "status": if self.passed() { "pass" } else { "fail" },
            "suites": suites.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }
}
