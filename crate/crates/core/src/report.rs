//! Pass/fail reports shared by the verification suites.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            pass: true,
            detail: String::new(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            pass: false,
            detail: detail.into(),
        }
    }

    /// Pass when no counterexample was recorded.
    pub fn from_option(name: impl Into<String>, counterexample: Option<String>) -> Self {
        match counterexample {
            None => Self::pass(name),
            Some(d) => Self::fail(name, d),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.pass {
                writeln!(f, "PASS  {}", c.name)?;
            } else {
                writeln!(f, "FAIL  {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}
