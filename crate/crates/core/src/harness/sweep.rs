//! Exhaustive sweeps of the trichotomy and of minimal doubling over canonical classes.

use rayon::prelude::*;
use serde::Serialize;

use super::canon::{enumerate_canonical, CanonicalClass, ENUMERATION_LIMIT};
use super::report::{ReportConfig, SweepReport, Tally, Violation, SWEEP_NOTE};
use crate::classify::{doubling, find_witness, verify_witness, Constants, Mode};
use crate::cyclic::CyclicSet;
use crate::error::{Error, Result};

/// Default upper modulus for exhaustive sweeps.
pub const SWEEP_DEFAULT_N_MAX: u64 = 18;

pub(crate) fn all_classes(n_min: u64, n_max: u64, size_max: usize) -> Result<Vec<CanonicalClass>> {
    if n_max > ENUMERATION_LIMIT {
        return Err(Error::ModulusOverBound { modulus: n_max, bound: ENUMERATION_LIMIT });
    }
    let mut out = Vec::new();
    for n in n_min.max(1)..=n_max {
        out.extend(enumerate_canonical(n, 1, size_max)?);
    }
    Ok(out)
}

fn sweep_class(c: &CanonicalClass, constants: &Constants, mode: Mode) -> Tally {
    let mut t = Tally::default();
    let a = &c.representative;
    t.counts.examined = 1;
    t.counts.covered = c.orbit_size;
    let search = match find_witness(a, constants, mode) {
        Ok(s) => s,
        Err(e) => {
            t.record_error(a.to_string(), e);
            return t;
        }
    };
    if !search.hypothesis_holds {
        t.counts.vacuous = 1;
        return t;
    }
    t.counts.hypothesis = 1;
    t.counts.bump(search.best_variant());
    if search.has_nontrivial() {
        t.counts.nontrivial = 1;
    }
    let unsound = search.witnesses.iter().find(|w| !matches!(verify_witness(a, w), Ok(true)));
    let detail = if search.witnesses.is_empty() {
        Some(format!("no witness (|2A|={}, |A|={})", search.doubling.doubled, search.doubling.size))
    } else {
        unsound.map(|w| format!("{} witness fails verification", w.variant()))
    };
    match detail {
        Some(detail) => {
            t.counts.violation = 1;
            t.violations.push(Violation { instance: a.to_string(), detail });
        }
        None => t.counts.pass = 1,
    }
    t
}

/// Runs the witness search on every canonical class with `n <= n_max` that satisfies the
/// hypothesis of `mode`; a class without a verified witness is a violation.
pub fn sweep_theorem(n_max: u64, mode: Mode, constants: &Constants) -> Result<SweepReport> {
    let classes = all_classes(1, n_max, usize::MAX)?;
    let tally = classes.par_iter().map(|c| sweep_class(c, constants, mode)).reduce(Tally::default, Tally::merge);
    let config = ReportConfig {
        kind: "sweep",
        suite: None,
        mode: Some(mode),
        constants: Some(*constants),
        n_max,
        trials: 0,
        seed: 0,
        min_hypothesis_hits: 1,
    };
    Ok(SweepReport::new(config, tally, Some(SWEEP_NOTE)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalRow {
    pub n: u64,
    pub k: usize,
    pub min_doubled: usize,
    /// The first canonical representative attaining the minimum.
    pub example: CyclicSet,
    pub classes: usize,
}

/// Minimal `|2A|` over all `A ⊆ Z_n` with `|A| = k`.
pub fn extremal_scan(n: u64, k: usize) -> Result<ExtremalRow> {
    if k == 0 || k as u64 > n {
        return Err(Error::InvalidParameter(format!("size {k} must lie in 1..={n}")));
    }
    let classes = enumerate_canonical(n, k, k)?;
    let mut best: Option<(usize, &CyclicSet)> = None;
    for c in &classes {
        let d = doubling(&c.representative)?.doubled;
        if best.is_none_or(|(m, _)| d < m) {
            best = Some((d, &c.representative));
        }
    }
    let (min_doubled, example) = best.expect("at least one class of each size");
    Ok(ExtremalRow { n, k, min_doubled, example: example.clone(), classes: classes.len() })
}

/// [`extremal_scan`] for every size `1..=n`.
pub fn extremal_table(n: u64) -> Result<Vec<ExtremalRow>> {
    (1..=n as usize).map(|k| extremal_scan(n, k)).collect()
}
