//! Machine-readable run reports: per-check records with residuals, plus
//! summary counts. All real numbers are serialized with 17 significant
//! digits so reports are bit-stable across runs.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Number;

use crate::config::RunConfig;

/// Serialize a real with 17 significant digits, preserving the exact
/// decimal text (requires serde_json's arbitrary-precision numbers).
pub fn real(value: f64) -> Number {
    format!("{value:.16e}")
        .parse()
        .expect("decimal float literal is a valid JSON number")
}

#[derive(Serialize)]
pub struct CheckRecord {
    /// Stable identifier, `module.check_name`.
    pub id: String,
    /// The identity or bound being verified, in words.
    pub reference: String,
    pub status: &'static str,
    /// Measured quantity the status is derived from. For residual checks
    /// it must stay at or below `tolerance`; for gap checks (noted in the
    /// reference) it must exceed it.
    pub residual: Number,
    pub tolerance: Number,
    pub runtime_ms: Number,
}

#[derive(Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub total: usize,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

/// Collects check records; keeps insertion order (callers insert in fixed
/// id order) and the pass/fail tally.
pub struct ReportBuilder {
    command: String,
    config: RunConfig,
    checks: Vec<CheckRecord>,
}

impl ReportBuilder {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Self {
            command: command.to_owned(),
            config,
            checks: Vec::new(),
        }
    }

    /// Record a residual-style check: passes iff residual ≤ tolerance.
    pub fn residual_check(
        &mut self,
        id: &str,
        reference: &str,
        residual: f64,
        tolerance: f64,
        runtime_ms: f64,
    ) {
        let status = if residual <= tolerance { "pass" } else { "fail" };
        self.push(id, reference, status, residual, tolerance, runtime_ms);
    }

    /// Record a gap-style check: passes iff the measured value exceeds the
    /// threshold. The reference text should say so.
    pub fn gap_check(
        &mut self,
        id: &str,
        reference: &str,
        measured: f64,
        threshold: f64,
        runtime_ms: f64,
    ) {
        let status = if measured > threshold { "pass" } else { "fail" };
        self.push(id, reference, status, measured, threshold, runtime_ms);
    }

    fn push(
        &mut self,
        id: &str,
        reference: &str,
        status: &'static str,
        residual: f64,
        tolerance: f64,
        runtime_ms: f64,
    ) {
        self.checks.push(CheckRecord {
            id: id.to_owned(),
            reference: reference.to_owned(),
            status,
            residual: real(residual),
            tolerance: real(tolerance),
            runtime_ms: real(runtime_ms),
        });
    }

    /// Run a closure producing a residual, timing it.
    pub fn timed_residual(
        &mut self,
        id: &str,
        reference: &str,
        tolerance: f64,
        body: impl FnOnce() -> f64,
    ) {
        let start = Instant::now();
        let residual = body();
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        self.residual_check(id, reference, residual, tolerance, elapsed);
    }

    pub fn finish(self) -> Report {
        let passed = self.checks.iter().filter(|c| c.status == "pass").count();
        let total = self.checks.len();
        Report {
            command: self.command,
            config: self.config,
            checks: self.checks,
            summary: Summary {
                passed,
                failed: total - passed,
                total,
            },
        }
    }
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self).context("serializing report")?;
        text.push('\n');
        Ok(text)
    }

    /// Write to the configured path, or standard output when none is set.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let text = self.to_json()?;
        match out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("writing report {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(real(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(real(0.0).to_string(), "0.0000000000000000e+0");
        assert_eq!(real(2.0).to_string(), "2.0000000000000000e+0");
    }

    #[test]
    fn tally_and_exit_condition() {
        let mut b = ReportBuilder::new("verify", RunConfig::default());
        b.residual_check("a.b", "x", 0.0, 1e-12, 0.1);
        b.residual_check("a.c", "y", 1.0, 1e-12, 0.1);
        let report = b.finish();
        assert_eq!(report.summary.passed, 1);
        assert_eq!(report.summary.failed, 1);
        assert_eq!(report.checks[0].status, "pass");
        assert_eq!(report.checks[1].status, "fail");
    }
}
