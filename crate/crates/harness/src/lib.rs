//! Verification harness for `weaklp`: seeded generators, a brute-force
//! norm oracle, property suites for every constant-bearing inequality, and a
//! report measuring the embedding constants across truncation sizes.

pub mod chain;
pub mod error;
pub mod generate;
pub mod oracle;
pub mod report;
pub mod suites;

pub use chain::{chain_report, ChainConfig, ChainReport, LinkReport};
pub use error::{HarnessError, Result};
pub use generate::{gen_atoms, gen_stack, Distribution};
pub use oracle::oracle_norm;
pub use report::{Check, SizeCaps, SuiteReport, TrialConfig, TrialRecord};
pub use suites::{run_suite, suite_names};
