//! Trial records and suite reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One inequality `lhs ≤ rhs` with slack `tol`; equalities are phrased as
/// `|a - b| ≤ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
}

impl Check {
    /// `lhs ≤ rhs + slack·max(1, |rhs|)`.
    pub fn le(name: &'static str, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self { name, lhs, rhs, tol: slack * rhs.abs().max(1.0) }
    }

    /// `|a - b| ≤ slack·max(1, |a|, |b|)`.
    pub fn close(name: &'static str, a: f64, b: f64, slack: f64) -> Self {
        Self { name, lhs: (a - b).abs(), rhs: 0.0, tol: slack * a.abs().max(b.abs()).max(1.0) }
    }

    /// Bitwise equality.
    pub fn exact(name: &'static str, holds: bool) -> Self {
        Self { name, lhs: if holds { 0.0 } else { 1.0 }, rhs: 0.0, tol: 0.0 }
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn passes(&self) -> bool {
        // NaN anywhere fails.
        self.margin() >= -self.tol
    }
}

/// What a single trial hands back to the runner.
#[derive(Debug, Clone, Default)]
pub struct TrialOutcome {
    pub inputs: String,
    pub measured: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub ratio: Option<f64>,
}

impl TrialOutcome {
    pub fn new(inputs: impl Into<String>) -> Self {
        Self { inputs: inputs.into(), ..Default::default() }
    }

    pub fn measure(&mut self, name: &str, value: f64) {
        self.measured.insert(name.to_string(), value);
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Keeps the largest observed ratio; `0/0` is skipped.
    pub fn observe_ratio(&mut self, num: f64, den: f64) {
        if den > 0.0 {
            let r = num / den;
            self.ratio = Some(self.ratio.map_or(r, |old| old.max(r)));
        }
    }
}

/// Per-trial record as serialized in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub p: f64,
    /// Human-readable digest of the generated input (shape, distribution).
    pub inputs: String,
    pub measured: BTreeMap<String, f64>,
    /// Name of the check with the smallest slack-adjusted margin.
    pub check: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub ratio: Option<f64>,
    pub pass: bool,
    pub failed_checks: Vec<String>,
}

impl TrialRecord {
    pub(crate) fn from_outcome(trial: usize, seed: u64, p: f64, outcome: TrialOutcome) -> Self {
        let failed_checks = outcome
            .checks
            .iter()
            .filter(|c| !c.passes())
            .map(|c| c.name.to_string())
            .collect::<Vec<_>>();
        let binding = outcome
            .checks
            .iter()
            .min_by(|a, b| {
                let ka = a.margin() + a.tol;
                let kb = b.margin() + b.tol;
                ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Less)
            })
            .cloned()
            .unwrap_or(Check { name: "none", lhs: 0.0, rhs: 0.0, tol: 0.0 });
        Self {
            trial,
            seed,
            p,
            inputs: outcome.inputs,
            measured: outcome.measured,
            check: binding.name.to_string(),
            value: binding.lhs,
            bound: binding.rhs,
            margin: binding.margin(),
            tolerance: binding.tol,
            ratio: outcome.ratio,
            pass: failed_checks.is_empty(),
            failed_checks,
        }
    }
}

/// Size limits for generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeCaps {
    pub max_atoms: usize,
    pub max_level: usize,
    pub max_k: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        Self { max_atoms: 64, max_level: 8, max_k: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub suite: String,
    pub p_values: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub caps: SizeCaps,
}

impl TrialConfig {
    pub fn new(suite: &str, p: f64, trials: usize, seed: u64) -> Self {
        Self { suite: suite.to_string(), p_values: vec![p], trials, seed, caps: SizeCaps::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    /// The exponent when a single one was configured, otherwise `null`;
    /// trial `i` uses `p_values[i % p_values.len()]`.
    pub p: Option<f64>,
    pub p_values: Vec<f64>,
    pub seed: u64,
    pub trials: usize,
    pub pass: bool,
    pub pass_count: usize,
    pub max_ratio: Option<f64>,
    pub min_margin: f64,
    pub wall_time_ms: f64,
    pub records: Vec<TrialRecord>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_semantics() {
        assert!(Check::le("a", 1.0, 1.0, 0.0).passes());
        assert!(Check::le("a", 1.0 + 1e-13, 1.0, 1e-12).passes());
        assert!(!Check::le("a", 1.0 + 1e-11, 1.0, 1e-12).passes());
        assert!(!Check::le("a", f64::NAN, 1.0, 1e-12).passes());
        assert!(Check::close("c", 1e6, 1e6 + 1e-7, 1e-12).passes());
        assert!(Check::exact("e", true).passes());
        assert!(!Check::exact("e", false).passes());
    }

    #[test]
    fn record_picks_binding_check() {
        let mut o = TrialOutcome::new("x");
        o.check(Check::le("loose", 1.0, 10.0, 1e-9));
        o.check(Check::le("tight", 2.0, 2.5, 1e-9));
        o.observe_ratio(0.0, 0.0);
        let r = TrialRecord::from_outcome(0, 1, 2.0, o);
        assert_eq!(r.check, "tight");
        assert_eq!(r.margin, 0.5);
        assert!(r.pass);
        assert_eq!(r.ratio, None);
    }
}
