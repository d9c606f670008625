//! Check reports shared by the verification operations and the CLI.

use serde::Serialize;

/// Outcome of one named check on one instance. Witnesses carry enough detail
/// to reproduce a failure (offending tree keys, edges, or values).
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub instance: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn pass(check: impl Into<String>, instance: impl Into<String>) -> Check {
        Check { check: check.into(), instance: instance.into(), passed: true, witnesses: Vec::new() }
    }

    pub fn fail(
        check: impl Into<String>,
        instance: impl Into<String>,
        witnesses: Vec<String>,
    ) -> Check {
        Check { check: check.into(), instance: instance.into(), passed: false, witnesses }
    }

    pub fn from_violations(
        check: impl Into<String>,
        instance: impl Into<String>,
        violations: Vec<String>,
    ) -> Check {
        if violations.is_empty() {
            Check::pass(check, instance)
        } else {
            Check::fail(check, instance, violations)
        }
    }
}

/// Versioned report envelope emitted as JSON by the CLI.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> Report {
        Report { schema: 1, suite: suite.into(), checks }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
