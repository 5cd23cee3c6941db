//! Randomized verification suites: the graded monoidal laws, the circuit
//! axioms, factorization round trips, conservativity and the let-laws of the
//! language. Every check is an exact matrix comparison.

pub mod axioms;
pub mod laws;
pub mod programs;
pub mod random;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bimp::{BimpError, Evaluator, Model};
use crate::terms::GradedTerm;

/// Failing instances kept per check.
const MAX_FAILURES: usize = 5;

/// Outcome of one named check over many instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub description: String,
    pub passed: usize,
    pub failed: usize,
    /// The first few offending instances.
    pub failures: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, description: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            description: description.into(),
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn record(&mut self, ok: bool, instance: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(instance());
            }
        }
    }

    pub fn fail(&mut self, message: String) {
        self.record(false, || message);
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "ok  " } else { "FAIL" };
        write!(
            f,
            "{status} {:<6} {:>4} passed {:>4} failed  {}",
            self.name, self.passed, self.failed, self.description
        )?;
        for instance in &self.failures {
            write!(f, "\n       counterexample: {instance}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.suite)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact equality under `ev`; any evaluation error counts as a difference
/// and is reported.
pub(crate) fn same<M: Model>(
    ev: &Evaluator<M>,
    lhs: &GradedTerm,
    rhs: &GradedTerm,
) -> Result<bool, BimpError> {
    let l = ev.eval(lhs)?;
    let r = ev.eval(rhs)?;
    Ok(l == r)
}

pub(crate) fn record_eq<M: Model>(
    check: &mut Check,
    ev: &Evaluator<M>,
    lhs: &GradedTerm,
    rhs: &GradedTerm,
) {
    match same(ev, lhs, rhs) {
        Ok(ok) => check.record(ok, || format!("{lhs}  vs  {rhs}")),
        Err(e) => check.fail(format!("{lhs}  vs  {rhs}: {e}")),
    }
}

/// Runs the law, axiom and factorization suites with `count` instances per
/// randomized check.
pub fn verify_all<M: Model>(model: M, seed: u64, count: usize) -> Vec<SuiteReport> {
    let ev = Evaluator::new(model);
    vec![
        laws::graded_laws(seed, count, &random::Bounds::default()),
        axioms::circuit_axioms(&ev, seed, count.min(axioms::PARAMETER_SAMPLES)),
        laws::factorization(seed, count, count),
        laws::conservativity(seed, count),
    ]
}
