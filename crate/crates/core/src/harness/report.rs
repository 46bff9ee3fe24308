use std::collections::BTreeMap;

use serde::Serialize;

use crate::addcomb::{LemmaVerdict, Outcome};
use crate::classify::{Constants, Mode};

pub const SCHEMA_VERSION: u32 = 1;

pub(crate) const SWEEP_NOTE: &str = "At desk-scale n the dense-coset case with H = Z_n is usually available, \
so the sweep cannot falsify the trichotomy itself; the lemma suites carry the verification weight.";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportConfig {
    /// `sweep` or `lemmas`.
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<Constants>,
    pub n_max: u64,
    pub trials: u64,
    pub seed: u64,
    pub min_hypothesis_hits: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    /// Instances evaluated (canonical classes for sweeps).
    pub examined: u64,
    /// Sets covered, counting every member of each canonical class.
    pub covered: u64,
    pub hypothesis: u64,
    pub vacuous: u64,
    pub pass: u64,
    pub violation: u64,
    /// Sweeps: best-witness variants. Lemma suites: hypothesis hits per lemma and sub-lemma.
    pub by_variant: BTreeMap<String, u64>,
    /// Sweeps: hypothesis instances with a witness other than the whole-group dense coset.
    pub nontrivial: u64,
}

impl Counts {
    pub fn merge(mut self, other: Counts) -> Counts {
        self.examined += other.examined;
        self.covered += other.covered;
        self.hypothesis += other.hypothesis;
        self.vacuous += other.vacuous;
        self.pass += other.pass;
        self.violation += other.violation;
        self.nontrivial += other.nontrivial;
        for (k, v) in other.by_variant {
            *self.by_variant.entry(k).or_insert(0) += v;
        }
        self
    }

    pub(crate) fn bump(&mut self, key: impl Into<String>) {
        *self.by_variant.entry(key.into()).or_insert(0) += 1;
    }
}

/// A failing instance, with enough text to replay it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub instance: String,
    pub detail: String,
}

/// Partial results of a shard of work. Merging is commutative and associative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub counts: Counts,
    pub violations: Vec<Violation>,
}

impl Tally {
    pub fn merge(self, other: Tally) -> Tally {
        let mut violations = self.violations;
        violations.extend(other.violations);
        violations.sort();
        Tally { counts: self.counts.merge(other.counts), violations }
    }

    /// Records one lemma verdict, with every sub-verdict whose hypothesis held.
    pub(crate) fn record(&mut self, instance: impl FnOnce() -> String, v: &LemmaVerdict) {
        self.counts.examined += 1;
        self.counts.covered += 1;
        if v.any_hypothesis() {
            self.counts.hypothesis += 1;
            if !v.is_violation() {
                self.counts.pass += 1;
            }
        } else {
            self.counts.vacuous += 1;
        }
        let mut failed = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if x.hypothesis_holds {
                self.counts.bump(x.lemma.to_string());
            }
            if x.outcome() == Outcome::Violation {
                failed.push(format!("{}: {}", x.lemma, x.detail));
            }
            stack.extend(x.sub_verdicts.iter());
        }
        if !failed.is_empty() {
            self.counts.violation += 1;
            self.violations.push(Violation { instance: instance(), detail: failed.join("; ") });
        }
    }

    pub(crate) fn record_error(&mut self, instance: String, e: crate::Error) {
        self.counts.examined += 1;
        self.counts.violation += 1;
        self.violations.push(Violation { instance, detail: format!("error: {e}") });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub config: ReportConfig,
    pub counts: Counts,
    pub violations: Vec<Violation>,
    pub hypothesis_minimum_met: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

impl SweepReport {
    pub(crate) fn new(config: ReportConfig, tally: Tally, note: Option<&'static str>) -> SweepReport {
        SweepReport {
            schema_version: SCHEMA_VERSION,
            hypothesis_minimum_met: tally.counts.hypothesis >= config.min_hypothesis_hits,
            config,
            counts: tally.counts,
            violations: tally.violations,
            runtime_ms: None,
            note,
        }
    }

    /// No violations and enough hypothesis hits.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.hypothesis_minimum_met
    }
}
