//! Report types produced by the verification suite.
//!
//! A report is a pure function of the fiber type and the check
//! configuration: it contains no timestamps, hostnames, or other
//! run-specific data, so two runs with equal inputs serialize to
//! byte-identical output.

use crate::error::Result;
use crate::hj::{FiberType, HjExpansion};
use crate::jsonfmt::to_canonical_json;
use crate::verify::CheckConfig;
use serde::Serialize;
use std::fmt::Write as _;

/// Replaces non-finite values so reports always serialize cleanly.
pub(crate) fn clean(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}

/// The concrete input on which a failed check was worst.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Chart the sample was drawn in.
    pub chart: String,
    /// Sample coordinates as `[re, im]` pairs.
    pub point: Vec<[f64; 2]>,
    /// What went wrong at this sample.
    pub detail: String,
}

impl Witness {
    pub(crate) fn new(chart: &str, coords: &[[f64; 2]], detail: String) -> Self {
        Witness {
            chart: chart.to_string(),
            point: coords.iter().map(|c| [clean(c[0]), clean(c[1])]).collect(),
            detail,
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    /// Stable, deterministic check name.
    pub name: String,
    /// Whether the check passed.
    pub passed: bool,
    /// Number of comparisons performed.
    pub samples: u64,
    /// Largest scaled error observed (0 for exact structural checks).
    pub max_error: f64,
    /// Threshold the error was compared against (0 for exact checks).
    pub tolerance: f64,
    /// Optional free-form context.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Worst offending sample, recorded only on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckRecord {
    /// An exact (integer/structural) check outcome.
    pub(crate) fn exact(name: impl Into<String>, passed: bool, note: Option<String>) -> Self {
        CheckRecord {
            name: name.into(),
            passed,
            samples: 1,
            max_error: 0.0,
            tolerance: 0.0,
            note,
            witness: None,
        }
    }
}

/// The full outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Fiber type the suite ran on.
    pub fiber: FiberType,
    /// Its expansion; absent for the regular fiber.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion: Option<HjExpansion>,
    /// The configuration the suite ran with.
    pub config: CheckConfig,
    /// Run-level context (regular fiber, applied mutation, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Per-check outcomes, in the suite's fixed order.
    pub checks: Vec<CheckRecord>,
    /// Number of checks run.
    pub total_checks: usize,
    /// Number of failed checks.
    pub failed_checks: usize,
    /// Whether every check passed.
    pub passed: bool,
}

impl VerificationReport {
    pub(crate) fn assemble(
        fiber: FiberType,
        expansion: Option<HjExpansion>,
        config: CheckConfig,
        note: Option<String>,
        checks: Vec<CheckRecord>,
    ) -> Self {
        let total_checks = checks.len();
        let failed_checks = checks.iter().filter(|c| !c.passed).count();
        VerificationReport {
            fiber,
            expansion,
            config,
            note,
            checks,
            total_checks,
            failed_checks,
            passed: failed_checks == 0,
        }
    }

    /// Canonical JSON rendering (sorted keys, pinned float format);
    /// byte-identical across runs with equal inputs.
    pub fn to_canonical_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    /// Deterministic human-readable rendering.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Verification report");
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "- fiber type: 1/{} (1, {})",
            self.fiber.r(),
            self.fiber.a()
        );
        if let Some(exp) = &self.expansion {
            let coeffs: Vec<String> = exp.coefficients.iter().map(|b| b.to_string()).collect();
            let rems: Vec<String> = exp.remainders.iter().map(|r| r.to_string()).collect();
            let _ = writeln!(out, "- expansion: [{}]", coeffs.join(", "));
            let _ = writeln!(out, "- remainders: {}", rems.join(", "));
        }
        let _ = writeln!(out, "- seed: {}", self.config.seed);
        let _ = writeln!(
            out,
            "- samples per check: {}",
            self.config.samples_per_check
        );
        let _ = writeln!(out, "- group samples: {}", self.config.group_samples);
        let _ = writeln!(out, "- tolerance: {:.16e}", self.config.tol);
        if let Some(note) = &self.note {
            let _ = writeln!(out, "- note: {note}");
        }
        let _ = writeln!(
            out,
            "- result: {} ({} checks, {} failed)",
            if self.passed { "PASS" } else { "FAIL" },
            self.total_checks,
            self.failed_checks
        );
        if self.checks.is_empty() {
            return out;
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "| check | result | samples | max error | tolerance |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.16e} | {:.16e} |",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.samples,
                clean(c.max_error),
                clean(c.tolerance),
            );
        }
        let failures: Vec<&CheckRecord> = self.checks.iter().filter(|c| !c.passed).collect();
        if !failures.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "## Failures");
            for c in failures {
                let _ = writeln!(out);
                let _ = writeln!(out, "### {}", c.name);
                let _ = writeln!(
                    out,
                    "- max error {:.16e} exceeds tolerance {:.16e}",
                    clean(c.max_error),
                    clean(c.tolerance)
                );
                if let Some(note) = &c.note {
                    let _ = writeln!(out, "- note: {note}");
                }
                if let Some(w) = &c.witness {
                    let coords: Vec<String> = w
                        .point
                        .iter()
                        .map(|p| format!("({:.16e}, {:.16e})", p[0], p[1]))
                        .collect();
                    let _ = writeln!(
                        out,
                        "- witness in chart {}: [{}]",
                        w.chart,
                        coords.join(", ")
                    );
                    let _ = writeln!(out, "- detail: {}", w.detail);
                }
            }
        }
        out
    }
}
