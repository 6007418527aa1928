//! Verification reports: named checks with pass/fail status and witnesses.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

/// Witness lists are truncated to this many entries; the total is kept in
/// `violations`.
pub const MAX_WITNESSES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    /// Total number of violations found, which may exceed `witnesses.len()`.
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            detail: None,
            witnesses: Vec::new(),
            violations: 0,
            elapsed_ms: None,
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check { status: Status::Skipped, detail: Some(why.into()), ..Check::pass(name) }
    }

    /// A check that fails iff `witnesses` is nonempty.
    pub fn from_witnesses(name: impl Into<String>, witnesses: Vec<String>) -> Self {
        let violations = witnesses.len();
        let mut c = Check::pass(name);
        if violations > 0 {
            c.status = Status::Fail;
            c.violations = violations;
            c.witnesses = witnesses.into_iter().take(MAX_WITNESSES).collect();
        }
        c
    }

    pub fn expect(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let mut c = Check::pass(name);
        let detail = detail.into();
        if !detail.is_empty() {
            c.detail = Some(detail);
        }
        if !ok {
            c.status = Status::Fail;
            c.violations = 1;
        }
        c
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every check name, for nesting sub-reports.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{prefix}{}", c.name);
        }
        self
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn strip_timing(&mut self) {
        for c in &mut self.checks {
            c.elapsed_ms = None;
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            write!(f, "[{mark}] {}", c.name)?;
            if let Some(d) = &c.detail {
                write!(f, " -- {d}")?;
            }
            if let Some(ms) = c.elapsed_ms {
                write!(f, " ({ms:.1} ms)")?;
            }
            writeln!(f)?;
            for w in &c.witnesses {
                writeln!(f, "       witness: {w}")?;
            }
            if c.violations > c.witnesses.len() {
                writeln!(f, "       ... {} violations in total", c.violations)?;
            }
        }
        Ok(())
    }
}
