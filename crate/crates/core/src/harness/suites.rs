//! Lemma suites: each runs one checker over an exhaustive small-`n` domain, plus a seeded
//! random domain where one is defined.
//!
//! Pair domains are reduced by symmetry: the lemmas are invariant under translating `A`
//! and `B` independently and dilating both by a common unit, so `A` ranges over canonical
//! classes and `B` over the sets containing `0`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{ReportConfig, SweepReport, Tally};
use super::sweep::all_classes;
use crate::addcomb::{
    alpha_verdict, consol_verdict, coset_sum_bounds, elementary_verdict, is_vsds, kemp_lemma_verdict,
    kemperman_verdict, kneser_verdict, mantel_verdict, olson_verdict, triple_verdict, LemmaId, LemmaVerdict, Witness,
};
use crate::classify::combo_verdict;
use crate::cyclic::{subgroups, CyclicSet};
use crate::error::{Error, Result};
use crate::fourier::{arc_concentrate, energy_verdict, katz_koester_verdict};
use crate::rectify::rect_coset_bound_verdict;

/// Random pairs are drawn with `n <= 40`.
pub const RANDOM_PAIR_N_MAX: u64 = 40;
/// Default seed for the random domains.
pub const DEFAULT_SEED: u64 = 20_250_101;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Kneser,
    Olson,
    Consol,
    Vsds,
    Mantel,
    Triple,
    Alpha,
    Rect2a,
    Kemp,
    KempLemma,
    Combo,
    KatzKoester,
    Energy,
    Arc,
    CosetBounds,
    Elementary,
}

/// Size of a suite's default domain and the hypothesis hits it must reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteDefaults {
    /// Exhaustive bound on `n`, or the range of `n` for random-only suites.
    pub n_max: u64,
    pub trials: u64,
    pub min_hits: u64,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::Kneser,
        Suite::Olson,
        Suite::Consol,
        Suite::Vsds,
        Suite::Mantel,
        Suite::Triple,
        Suite::Alpha,
        Suite::Rect2a,
        Suite::Kemp,
        Suite::KempLemma,
        Suite::Combo,
        Suite::KatzKoester,
        Suite::Energy,
        Suite::Arc,
        Suite::CosetBounds,
        Suite::Elementary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kneser => "kneser",
            Suite::Olson => "olson",
            Suite::Consol => "consol",
            Suite::Vsds => "vsds",
            Suite::Mantel => "mantel",
            Suite::Triple => "triple",
            Suite::Alpha => "alpha",
            Suite::Rect2a => "rect2a",
            Suite::Kemp => "kemp",
            Suite::KempLemma => "kemp_lemma",
            Suite::Combo => "combo",
            Suite::KatzKoester => "katz_koester",
            Suite::Energy => "energy",
            Suite::Arc => "arc",
            Suite::CosetBounds => "coset_bounds",
            Suite::Elementary => "elementary",
        }
    }

    pub fn defaults(self) -> SuiteDefaults {
        let (n_max, trials, min_hits) = match self {
            Suite::Kneser => (12, 100_000, 100_000),
            Suite::Olson => (12, 100_000, 10_000),
            Suite::Consol => (12, 100_000, 10_000),
            Suite::Vsds => (16, 0, 1_000),
            Suite::Mantel => (16, 0, 100),
            Suite::Triple => (30, 0, 10_000),
            Suite::Alpha => (15, 0, 100),
            Suite::Rect2a => (14, 0, 100),
            Suite::Kemp => (14, 0, 10_000),
            Suite::KempLemma => (14, 0, 30),
            Suite::Combo => (16, 0, 100),
            Suite::KatzKoester => (12, 0, 250),
            Suite::Energy => (128, 10_000, 10_000),
            Suite::Arc => (64, 10_000, 10_000),
            Suite::CosetBounds => (12, 0, 10_000),
            Suite::Elementary => (14, 0, 1_000),
        };
        SuiteDefaults { n_max, trials, min_hits }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Overrides for a suite's domain; `None` keeps the suite default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LemmaConfig {
    pub n_max: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

type SetCheck = fn(&CyclicSet) -> Result<LemmaVerdict>;
type PairCheck = fn(&CyclicSet, &CyclicSet) -> Result<LemmaVerdict>;

fn record(t: &mut Tally, instance: impl FnOnce() -> String, r: Result<LemmaVerdict>) {
    match r {
        Ok(v) => t.record(instance, &v),
        Err(e) => t.record_error(instance(), e),
    }
}

fn sum_tallies(parts: impl ParallelIterator<Item = Tally>) -> Tally {
    parts.reduce(Tally::default, Tally::merge)
}

fn over_classes(n_max: u64, size_max: usize, f: impl Fn(&CyclicSet, &mut Tally) + Sync) -> Result<Tally> {
    let classes = all_classes(1, n_max, size_max)?;
    Ok(sum_tallies(classes.par_iter().map(|c| {
        let mut t = Tally::default();
        f(&c.representative, &mut t);
        t
    })))
}

fn sets_exhaustive(n_max: u64, size_max: usize, check: SetCheck) -> Result<Tally> {
    over_classes(n_max, size_max, |a, t| record(t, || format!("A={a}"), check(a)))
}

fn pairs_exhaustive(n_max: u64, check: PairCheck) -> Result<Tally> {
    over_classes(n_max, usize::MAX, |a, t| {
        let n = a.modulus();
        for mask in (1..1u64 << n).step_by(2) {
            let b = CyclicSet::from_mask(n, mask);
            record(t, || format!("A={a} B={b}"), check(a, &b));
        }
    })
}

fn random_set(rng: &mut ChaCha8Rng, n: u64) -> CyclicSet {
    let k = rng.gen_range(1..=n as usize);
    CyclicSet::from_residues(n, sample(rng, n as usize, k).into_iter().map(|x| x as u64))
}

fn pairs_random(trials: u64, seed: u64, check: PairCheck) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(CyclicSet, CyclicSet)> = (0..trials)
        .map(|_| {
            let n = rng.gen_range(1..=RANDOM_PAIR_N_MAX);
            (random_set(&mut rng, n), random_set(&mut rng, n))
        })
        .collect();
    sum_tallies(pairs.par_iter().map(|(a, b)| {
        let mut t = Tally::default();
        record(&mut t, || format!("A={a} B={b}"), check(a, b));
        t
    }))
}

fn triple_domain(n_max: u64) -> Tally {
    sum_tallies((3..=n_max.max(2)).into_par_iter().map(|n| {
        let mut t = Tally::default();
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let a = CyclicSet::new(n, &[x, y, z]).expect("distinct residues");
                    record(&mut t, || format!("A={a}"), triple_verdict(&a));
                }
            }
        }
        t
    }))
}

fn alpha_domain(n_max: u64) -> Tally {
    sum_tallies((1..=n_max).into_par_iter().map(|n| {
        let mut t = Tally::default();
        for a1 in 0..n {
            for a2 in 0..n {
                for a3 in 0..n {
                    for beta in 0..n {
                        record(
                            &mut t,
                            || format!("n={n} alpha=({a1},{a2},{a3}) beta={beta}"),
                            alpha_verdict(n, [a1, a2, a3], beta),
                        );
                    }
                }
            }
        }
        t
    }))
}

/// `K` over all subgroups, `A` over subsets of `K` holding `0` with `2|A| >= |K|`, and
/// `B` over all sets holding `0`.
fn coset_bounds_domain(n_max: u64) -> Result<Tally> {
    let mut work = Vec::new();
    for n in 1..=n_max {
        for k in subgroups(n) {
            let members = k.elements();
            let gens: Vec<u64> = members.iter().filter(|&x| x != 0).collect();
            for bits in 0..1u64 << gens.len() {
                let mut elems = vec![0];
                elems.extend((0..gens.len()).filter(|i| bits >> i & 1 == 1).map(|i| gens[i]));
                if 2 * elems.len() as u64 >= k.order() {
                    work.push((k, CyclicSet::new(n, &elems)?));
                }
            }
        }
    }
    Ok(sum_tallies(work.par_iter().map(|(k, a)| {
        let n = a.modulus();
        let mut t = Tally::default();
        for mask in (1..1u64 << n).step_by(2) {
            let b = CyclicSet::from_mask(n, mask);
            record(&mut t, || format!("A={a} B={b} |K|={}", k.order()), coset_sum_bounds(a, &b, k));
        }
        t
    })))
}

fn combo_domain(n_max: u64) -> Result<Tally> {
    over_classes(n_max, usize::MAX, |a, t| {
        for l in subgroups(a.modulus()) {
            record(t, || format!("A={a} |L|={}", l.order()), combo_verdict(a, &l));
        }
    })
}

fn energy_domain(n_max: u64, trials: u64, seed: u64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<CyclicSet> = (0..trials)
        .map(|_| {
            let n = rng.gen_range(1..=n_max.max(1));
            random_set(&mut rng, n)
        })
        .collect();
    sum_tallies(sets.par_iter().map(|b| {
        let mut t = Tally::default();
        record(&mut t, || format!("B={b}"), energy_verdict(b));
        t
    }))
}

/// Multisets of up to `size_max` unit vectors. Half of the trials use angles `2πj/m`
/// for small `m`, which produces repeats and antipodal pairs.
fn arc_domain(size_max: u64, trials: u64, seed: u64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<Complex64>> = (0..trials)
        .map(|_| {
            let k = rng.gen_range(1..=size_max.max(1));
            let lattice = rng.gen_bool(0.5);
            let m = rng.gen_range(1..=12u64);
            (0..k)
                .map(|_| {
                    let theta =
                        if lattice { TAU * rng.gen_range(0..m) as f64 / m as f64 } else { rng.gen_range(0.0..TAU) };
                    Complex64::from_polar(1.0, theta)
                })
                .collect()
        })
        .collect();
    sum_tallies(inputs.par_iter().map(|z| {
        let mut t = Tally::default();
        let verdict = arc_concentrate(z).map(|r| {
            let witness = Witness::default().with_count("points", z.len()).with_count("members", r.members.len());
            LemmaVerdict::checked(
                LemmaId::ArcConcentration,
                r.meets_bound(),
                witness,
                format!("members={} bound={:.12}", r.members.len(), r.bound),
            )
        });
        let angles = || z.iter().map(|w| format!("{:.17}", w.arg())).collect::<Vec<_>>().join(",");
        record(&mut t, || format!("angles=[{}]", angles()), verdict);
        t
    }))
}

/// Runs one suite; the hypothesis-hit minimum is only enforced when the domain is at
/// least as large as the suite default.
pub fn lemma_suite(suite: Suite, config: &LemmaConfig) -> Result<SweepReport> {
    let defaults = suite.defaults();
    let n_max = config.n_max.unwrap_or(defaults.n_max);
    let trials = config.trials.unwrap_or(defaults.trials);
    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    let with_random = |exhaustive: Tally, check: PairCheck| exhaustive.merge(pairs_random(trials, seed, check));
    let tally = match suite {
        Suite::Kneser => with_random(pairs_exhaustive(n_max, kneser_verdict)?, kneser_verdict),
        Suite::Olson => with_random(pairs_exhaustive(n_max, olson_verdict)?, olson_verdict),
        Suite::Consol => with_random(pairs_exhaustive(n_max, consol_verdict)?, consol_verdict),
        Suite::Vsds => sets_exhaustive(n_max, usize::MAX, is_vsds)?,
        Suite::Mantel => sets_exhaustive(n_max, 6, mantel_verdict)?,
        Suite::Triple => triple_domain(n_max),
        Suite::Alpha => alpha_domain(n_max),
        Suite::Rect2a => sets_exhaustive(n_max, 6, rect_coset_bound_verdict)?,
        Suite::Kemp => pairs_exhaustive(n_max, kemperman_verdict)?,
        Suite::KempLemma => pairs_exhaustive(n_max, kemp_lemma_verdict)?,
        Suite::Elementary => pairs_exhaustive(n_max, elementary_verdict)?,
        Suite::Combo => combo_domain(n_max)?,
        Suite::KatzKoester => sets_exhaustive(n_max, usize::MAX, katz_koester_verdict)?,
        Suite::CosetBounds => coset_bounds_domain(n_max)?,
        Suite::Energy => energy_domain(n_max, trials, seed),
        Suite::Arc => arc_domain(n_max, trials, seed),
    };
    let full_domain = n_max >= defaults.n_max && trials >= defaults.trials;
    let config = ReportConfig {
        kind: "lemmas",
        suite: Some(suite.name()),
        mode: None,
        constants: None,
        n_max,
        trials,
        seed,
        min_hypothesis_hits: if full_domain { defaults.min_hits } else { 1 },
    };
    Ok(SweepReport::new(config, tally, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("nope".parse::<Suite>().unwrap_err(), Error::UnknownSuite("nope".into()));
    }

    #[test]
    fn small_domains_are_clean() {
        let cfg = LemmaConfig { n_max: Some(7), trials: Some(200), seed: Some(1) };
        for s in Suite::ALL {
            let r = lemma_suite(s, &cfg).unwrap();
            // both lemmas, as stated, have counterexamples already at n = 6 and n = 7
            if s == Suite::Mantel {
                assert!(r.violations.iter().any(|v| v.instance == "A=6:0,1,3"));
                assert!(r.violations.iter().all(|v| !v.detail.contains("mantel_graph")));
                continue;
            }
            if s == Suite::Alpha {
                assert!(r.violations.iter().any(|v| v.instance == "n=7 alpha=(0,1,3) beta=6"));
                continue;
            }
            assert!(r.violations.is_empty(), "{s}: {:?}", r.violations);
            assert!(r.counts.examined > 0, "{s}");
            assert_eq!(r.config.min_hypothesis_hits, 1);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let cfg = LemmaConfig { n_max: Some(5), trials: Some(300), seed: Some(9) };
        let a = lemma_suite(Suite::Kneser, &cfg).unwrap();
        let b = lemma_suite(Suite::Kneser, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
