//! Verification harness: canonical enumeration up to affine equivalence, theorem sweeps,
//! lemma suites and minimal-doubling tables.

mod canon;
mod report;
mod suites;
mod sweep;

pub use canon::{canonical_form, enumerate_canonical, CanonicalClass, CANONICAL_LIMIT, ENUMERATION_LIMIT};
pub use report::{Counts, ReportConfig, SweepReport, Tally, Violation, SCHEMA_VERSION};
pub use suites::{lemma_suite, LemmaConfig, Suite, SuiteDefaults, DEFAULT_SEED, RANDOM_PAIR_N_MAX};
pub use sweep::{extremal_scan, extremal_table, sweep_theorem, ExtremalRow, SWEEP_DEFAULT_N_MAX};
