//! Property suites. Each suite is a trial function that draws one random
//! instance, evaluates every inequality that applies to it, and returns the
//! checks; the runner never stops on a failing trial.

mod blocks;
mod dyadic;
mod norms;

use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand::Rng;
use rayon::prelude::*;
use weaklp::Params;

use crate::error::{HarnessError, Result};
use crate::generate::{trial_rng, Distribution};
use crate::report::{Check, SizeCaps, SuiteReport, TrialOutcome, TrialRecord};

/// Slack for closed-form inequalities.
pub const SLACK_CLOSED: f64 = 1e-12;
/// Slack for norm inequalities with accumulated rounding.
pub const SLACK_NORM: f64 = 1e-9;
/// Slack for algebraic identities (round trips, additivity).
pub const SLACK_IDENTITY: f64 = 1e-12;

/// Instances above this length are refused by the enumeration oracle suite.
pub const ORACLE_SUITE_MAX_LEN: usize = 12;
/// Highest level used by suites that materialize the block embedding.
pub const BLOCK_SUITE_MAX_LEVEL: usize = 5;

type TrialFn = fn(&mut TrialCtx) -> Result<TrialOutcome>;

const REGISTRY: &[(&str, TrialFn)] = &[
    ("norm_oracle", norms::norm_oracle),
    ("sandwich", norms::sandwich),
    ("p_estimate", norms::p_estimate),
    ("pairing", norms::pairing),
    ("boundf", dyadic::boundf),
    ("t_embed", dyadic::t_embed),
    ("phi", dyadic::phi),
    ("lemma_bound", dyadic::lemma_bound),
    ("lemma_compare", dyadic::lemma_compare),
    ("p_project", dyadic::p_project),
    ("r_embed", blocks::r_embed),
    ("parts", blocks::parts),
    ("w_project", blocks::w_project),
    ("tower", blocks::tower),
];

pub fn suite_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

/// Everything a trial may draw from.
pub struct TrialCtx {
    pub rng: ChaCha8Rng,
    pub params: Params,
    pub caps: SizeCaps,
}

impl TrialCtx {
    pub fn dist(&mut self) -> Distribution {
        Distribution::pick(&mut self.rng)
    }

    /// `k` uniform in `1..=max_k`.
    pub fn any_k(&mut self) -> usize {
        self.rng.random_range(1..=self.caps.max_k.max(1))
    }

    /// `k` from `{1, 2, 4, …}` up to `max_k`.
    pub fn dyadic_k(&mut self) -> usize {
        let choices: Vec<usize> = (0..).map(|e| 1usize << e).take_while(|&k| k <= self.caps.max_k.max(1)).collect();
        choices[self.rng.random_range(0..choices.len())]
    }

    pub fn level_up_to(&mut self, cap: usize) -> usize {
        self.rng.random_range(0..=cap.min(self.caps.max_level))
    }

    pub fn len_up_to(&mut self, cap: usize) -> usize {
        self.rng.random_range(0..=cap)
    }
}

fn validate(config: &crate::report::TrialConfig) -> Result<TrialFn> {
    let trial = REGISTRY
        .iter()
        .find(|(n, _)| *n == config.suite)
        .map(|(_, f)| *f)
        .ok_or_else(|| HarnessError::UnknownSuite { name: config.suite.clone(), valid: suite_names() })?;
    if config.trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    if config.p_values.is_empty() {
        return Err(HarnessError::Config("at least one exponent is required".into()));
    }
    for &p in &config.p_values {
        Params::new(p)?;
    }
    if config.caps.max_k == 0 {
        return Err(HarnessError::Config("max_k must be at least 1".into()));
    }
    Ok(trial)
}

pub fn run_suite(config: &crate::report::TrialConfig) -> Result<SuiteReport> {
    let trial_fn = validate(config)?;
    let start = Instant::now();
    let records: Vec<TrialRecord> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let p = config.p_values[i % config.p_values.len()];
            let mut ctx = TrialCtx {
                rng: trial_rng(config.seed, i as u64),
                params: Params::new(p).expect("validated"),
                caps: config.caps,
            };
            let outcome = trial_fn(&mut ctx).unwrap_or_else(|e| {
                let mut o = TrialOutcome::new(format!("error: {e}"));
                o.check(Check::exact("no_error", false));
                o
            });
            TrialRecord::from_outcome(i, config.seed, p, outcome)
        })
        .collect();
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let pass_count = records.iter().filter(|r| r.pass).count();
    let max_ratio = records.iter().filter_map(|r| r.ratio).reduce(f64::max);
    let min_margin = records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(SuiteReport {
        suite: config.suite.clone(),
        p: (config.p_values.len() == 1).then(|| config.p_values[0]),
        p_values: config.p_values.clone(),
        seed: config.seed,
        trials: config.trials,
        pass: pass_count == records.len(),
        pass_count,
        max_ratio,
        min_margin,
        wall_time_ms,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::TrialConfig;

    #[test]
    fn unknown_suite_lists_names() {
        let err = run_suite(&TrialConfig::new("nope", 2.0, 1, 0)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nope") && msg.contains("sandwich") && msg.contains("tower"));
    }

    #[test]
    fn bad_configs() {
        assert!(run_suite(&TrialConfig::new("sandwich", 2.0, 0, 0)).is_err());
        assert!(run_suite(&TrialConfig::new("sandwich", 1.0, 3, 0)).is_err());
    }

    #[test]
    fn every_suite_runs_and_passes_briefly() {
        for name in suite_names() {
            let mut cfg = TrialConfig::new(name, 2.0, 12, 3);
            cfg.p_values = vec![1.5, 2.0, 3.0];
            let report = run_suite(&cfg).unwrap();
            assert_eq!(report.records.len(), 12, "{name}");
            assert_eq!(report.p, None);
            let failed: Vec<_> = report.failures().map(|r| (&r.inputs, &r.failed_checks)).collect();
            assert!(report.pass, "{name}: {failed:?}");
        }
    }

    #[test]
    fn deterministic_modulo_wall_time() {
        let cfg = TrialConfig::new("pairing", 3.0, 20, 99);
        let mut a = run_suite(&cfg).unwrap();
        let mut b = run_suite(&cfg).unwrap();
        a.wall_time_ms = 0.0;
        b.wall_time_ms = 0.0;
        assert_eq!(a, b);
    }
}
