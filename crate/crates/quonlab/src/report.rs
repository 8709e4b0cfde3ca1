//! Verification records, JSON report and text summary.

use std::collections::BTreeMap;
use std::fmt::Write;

use quon_core::check::Check;
use serde::{Deserialize, Serialize};

use crate::config::Suite;
use crate::numeric::BackendKind;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorRecord {
    pub sector: usize,
    pub residual: f64,
    pub exact_zero: bool,
}

/// One checked identity, or one suite/q combination that could not run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: Suite,
    pub q: String,
    pub name: String,
    pub params: String,
    pub passed: bool,
    /// Largest per-sector residual.
    pub residual: f64,
    pub sectors: Vec<SectorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    pub fn from_check(suite: Suite, q: &str, c: &Check) -> Self {
        Record {
            suite,
            q: q.to_string(),
            name: c.name.clone(),
            params: c.params.clone(),
            passed: c.passed,
            residual: c.max_residual(),
            sectors: c
                .sectors
                .iter()
                .map(|s| SectorRecord {
                    sector: s.sector,
                    residual: s.residual.abs(),
                    exact_zero: s.exact_zero,
                })
                .collect(),
            detail: None,
            error: None,
        }
    }

    pub fn outcome(
        suite: Suite,
        q: &str,
        name: &str,
        params: String,
        passed: bool,
        detail: String,
    ) -> Self {
        Record {
            suite,
            q: q.to_string(),
            name: name.to_string(),
            params,
            passed,
            residual: 0.0,
            sectors: Vec::new(),
            detail: Some(detail),
            error: None,
        }
    }

    pub fn error(suite: Suite, q: &str, err: impl std::fmt::Display) -> Self {
        Record {
            suite,
            q: q.to_string(),
            name: suite.name().to_string(),
            params: String::new(),
            passed: false,
            residual: 0.0,
            sectors: Vec::new(),
            detail: None,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Records that could not be evaluated; also counted in `failed`.
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub backend: BackendKind,
    pub twice_j: u32,
    pub n_max: usize,
    pub series_order: usize,
    pub q: Vec<String>,
    pub tolerance: f64,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn summarize(records: &[Record]) -> Summary {
        let passed = records.iter().filter(|r| r.passed).count();
        Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            errors: records.iter().filter(|r| r.error.is_some()).count(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Per (suite, q) pass counts, then every failing record.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "quonlab report: j={} n_max={} K={} backend={} tolerance={:e}",
            quon_core::JLevel::new(self.twice_j),
            self.n_max,
            self.series_order,
            self.backend,
            self.tolerance
        );
        let mut groups: BTreeMap<(Suite, usize), (usize, usize, f64)> = BTreeMap::new();
        for r in &self.records {
            let qi = self.q.iter().position(|q| *q == r.q).unwrap_or(usize::MAX);
            let g = groups.entry((r.suite, qi)).or_insert((0, 0, 0.0));
            g.0 += 1;
            g.1 += r.passed as usize;
            g.2 = g.2.max(r.residual);
        }
        for ((suite, qi), (n, ok, res)) in &groups {
            let q = self.q.get(*qi).map(String::as_str).unwrap_or("?");
            let status = if ok == n { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  {:<10} q={:<8} {:>5}/{:<5} {:<4}  max residual {:.3e}",
                suite.name(),
                q,
                ok,
                n,
                status,
                res
            );
        }
        let failures: Vec<&Record> = self.records.iter().filter(|r| !r.passed).collect();
        if !failures.is_empty() {
            let _ = writeln!(out, "failures:");
            for r in failures {
                let why = r
                    .error
                    .clone()
                    .or_else(|| r.detail.clone())
                    .unwrap_or_else(|| format!("residual {:.3e}", r.residual));
                let label = if r.params.is_empty() {
                    r.name.clone()
                } else {
                    format!("{} {}", r.name, r.params)
                };
                let _ = writeln!(out, "  {} q={} {}: {}", r.suite, r.q, label, why);
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "total {}: {} passed, {} failed ({} errors)",
            s.total, s.passed, s.failed, s.errors
        );
        out
    }
}
