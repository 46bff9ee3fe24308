//! Witness search for the small-doubling trichotomy.
//!
//! For `A ⊆ Z_n` the engine looks, over every subgroup `H`, for
//!
//! * a dense coset: `A` inside one `H`-coset with `|A| > |H|/C`;
//! * a regular coset progression: `A ⊆ P + H` with `|P| >= 2`, the terms of `P` in distinct
//!   `H`-cosets and `(|P|-1)|H| <= |2A| - |A|`;
//! * a singular configuration: `A` meets exactly three `H`-cosets, not in progression, and
//!   `3|H| <= |2A| - |A|`.
//!
//! In the auxiliary mode the dense case is replaced by the large-increment condition
//! `|2A| - |A| >= n/C0`.

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::addcomb::{LemmaId, LemmaVerdict, Witness};
use crate::cyclic::{add_mod, is_ap, min_cover_of, subgroups, ApCover, CyclicSet, Subgroup};
use crate::error::{Error, Result};
use crate::rectify::{is_rectifiable_bounded, DEFAULT_SIZE_BOUND};

/// A nonnegative rational serialized as `{"num": .., "den": ..}` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl From<Ratio<u64>> for Fraction {
    fn from(r: Ratio<u64>) -> Self {
        Fraction { num: *r.numer(), den: *r.denom() }
    }
}

impl From<Fraction> for Ratio<u64> {
    fn from(f: Fraction) -> Self {
        Ratio::new(f.num, f.den)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingData {
    pub size: usize,
    pub doubled: usize,
    pub ratio: Fraction,
    pub delta: usize,
}

pub fn doubling(a: &CyclicSet) -> Result<DoublingData> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let size = a.len();
    let doubled = a.doubled().len();
    Ok(DoublingData { size, doubled, ratio: Ratio::new(doubled as u64, size as u64).into(), delta: doubled - size })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Main,
    Aux,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Mode::Main),
            "aux" => Ok(Mode::Aux),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}` (expected main or aux)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Main => "main",
            Mode::Aux => "aux",
        })
    }
}

/// The constants `C` (dense case) and `C0` (large increment), tied by `C = 5·C0/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Constants {
    pub c: Fraction,
    pub c0: Fraction,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c: Fraction { num: 30_000, den: 1 }, c0: Fraction { num: 24_000, den: 1 } }
    }
}

impl Constants {
    /// Fills in whichever constant is missing from `C = 5·C0/4`; when both are given
    /// they must satisfy it.
    pub fn from_overrides(c: Option<u64>, c0: Option<u64>) -> Result<Self> {
        let positive = |x: u64, name: &str| {
            if x == 0 {
                Err(Error::InvalidParameter(format!("{name} must be positive")))
            } else {
                Ok(Ratio::from_integer(x))
            }
        };
        let (c, c0) = match (c, c0) {
            (None, None) => return Ok(Constants::default()),
            (Some(c), None) => {
                let c = positive(c, "C")?;
                (c, c * Ratio::new(4, 5))
            }
            (None, Some(c0)) => {
                let c0 = positive(c0, "C0")?;
                (c0 * Ratio::new(5, 4), c0)
            }
            (Some(c), Some(c0)) => {
                let (c, c0) = (positive(c, "C")?, positive(c0, "C0")?);
                if c * 4 != c0 * 5 {
                    return Err(Error::InvalidParameter(format!(
                        "constants must satisfy 4C = 5C0, got C = {c} and C0 = {c0}"
                    )));
                }
                (c, c0)
            }
        };
        Ok(Constants { c: c.into(), c0: c0.into() })
    }

    fn c(&self) -> Ratio<u64> {
        self.c.into()
    }

    fn c0(&self) -> Ratio<u64> {
        self.c0.into()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "variant")]
pub enum StructureWitness {
    DenseCoset {
        subgroup_order: u64,
        density: Fraction,
        /// `H = Z_n`, which is available whenever `n < C·|A|`.
        whole_group: bool,
        constant: Fraction,
    },
    Regular {
        subgroup_order: u64,
        progression: ApCover,
        /// `(|P|-1)|H|`.
        increment: u64,
        delta: u64,
    },
    Singular {
        subgroup_order: u64,
        /// The three cosets met, as residues modulo the index.
        cosets: [u64; 3],
        /// `3|H|`.
        increment: u64,
        delta: u64,
    },
    LargeIncrement {
        delta: u64,
        modulus: u64,
        constant: Fraction,
    },
}

impl StructureWitness {
    pub fn variant(&self) -> &'static str {
        match self {
            StructureWitness::DenseCoset { .. } => "DenseCoset",
            StructureWitness::Regular { .. } => "Regular",
            StructureWitness::Singular { .. } => "Singular",
            StructureWitness::LargeIncrement { .. } => "LargeIncrement",
        }
    }

    pub fn subgroup_order(&self) -> Option<u64> {
        match self {
            StructureWitness::DenseCoset { subgroup_order, .. }
            | StructureWitness::Regular { subgroup_order, .. }
            | StructureWitness::Singular { subgroup_order, .. } => Some(*subgroup_order),
            StructureWitness::LargeIncrement { .. } => None,
        }
    }

    /// Everything except a dense witness with `H = Z_n`.
    pub fn is_nontrivial(&self) -> bool {
        !matches!(self, StructureWitness::DenseCoset { whole_group: true, .. })
    }

    fn priority(&self) -> (u8, u64, u64) {
        match self {
            StructureWitness::Regular { increment, subgroup_order, .. } => (0, *increment, *subgroup_order),
            StructureWitness::Singular { subgroup_order, .. } => (1, u64::MAX - subgroup_order, 0),
            StructureWitness::DenseCoset { subgroup_order, .. } => (2, *subgroup_order, 0),
            StructureWitness::LargeIncrement { .. } => (3, 0, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSearch {
    pub mode: Mode,
    pub doubling: DoublingData,
    /// `|2A| < 9/4 |A|`, and in the auxiliary mode also `|2A| < n` and `A` not in a proper coset.
    pub hypothesis_holds: bool,
    pub in_proper_coset: bool,
    pub witnesses: Vec<StructureWitness>,
    pub best: Option<StructureWitness>,
}

impl WitnessSearch {
    pub fn best_variant(&self) -> &'static str {
        self.best.as_ref().map_or("None", StructureWitness::variant)
    }

    pub fn has_nontrivial(&self) -> bool {
        self.witnesses.iter().any(StructureWitness::is_nontrivial)
    }
}

/// Whether the hypothesis of the selected mode holds.
pub fn theorem_hypothesis(a: &CyclicSet, d: &DoublingData, mode: Mode) -> bool {
    let small = 4 * d.doubled < 9 * d.size;
    match mode {
        Mode::Main => small,
        Mode::Aux => small && (d.doubled as u64) < a.modulus() && !a.in_proper_coset(),
    }
}

/// Every witness over every subgroup, plus the preferred one: the regular witness with the
/// smallest increment, then the singular witness with the largest subgroup, then a dense
/// coset (smallest subgroup) or a large increment.
pub fn find_witness(a: &CyclicSet, constants: &Constants, mode: Mode) -> Result<WitnessSearch> {
    let d = doubling(a)?;
    let n = a.modulus();
    let delta = d.delta as u64;
    let size = d.size as u64;
    let mut witnesses = Vec::new();

    match mode {
        Mode::Main => {
            let span = a.coset_span();
            let c = constants.c();
            for h in subgroups(n) {
                // A lies in one H-coset exactly when H contains the span of A - A
                if h.order() % span.order() != 0 {
                    continue;
                }
                if c * size > Ratio::from_integer(h.order()) {
                    witnesses.push(StructureWitness::DenseCoset {
                        subgroup_order: h.order(),
                        density: Ratio::new(size, h.order()).into(),
                        whole_group: !h.is_proper(),
                        constant: constants.c,
                    });
                }
            }
        }
        Mode::Aux => {
            if constants.c0() * delta >= Ratio::from_integer(n) {
                witnesses.push(StructureWitness::LargeIncrement { delta, modulus: n, constant: constants.c0 });
            }
        }
    }

    for h in subgroups(n) {
        if !h.is_proper() || h.order() > delta {
            continue;
        }
        witnesses.extend(regular_witness(a, &h, delta));
        if 3 * h.order() <= delta {
            let image = a.project(&h);
            if image.len() == 3 && is_ap(&image).is_none() {
                let e = image.elements();
                witnesses.push(StructureWitness::Singular {
                    subgroup_order: h.order(),
                    cosets: [e[0], e[1], e[2]],
                    increment: 3 * h.order(),
                    delta,
                });
            }
        }
    }

    let best = witnesses.iter().min_by_key(|w| w.priority()).cloned();
    Ok(WitnessSearch {
        mode,
        doubling: d,
        hypothesis_holds: theorem_hypothesis(a, &d, mode),
        in_proper_coset: a.in_proper_coset(),
        witnesses,
        best,
    })
}

/// The minimal progression covering `φ_H(A)`, lifted to `Z_n`; a single coset is covered
/// by a two-term progression so that `|P| > 1`.
fn regular_witness(a: &CyclicSet, h: &Subgroup, delta: u64) -> Option<StructureWitness> {
    let n = a.modulus();
    let m = h.index();
    let cover = min_cover_of(&a.project(h))?;
    let (start, diff, length) =
        if cover.length == 1 { (cover.start, 1, 2) } else { (cover.start, cover.diff, cover.length) };
    let increment = (length - 1) * h.order();
    if increment > delta || length > m {
        return None;
    }
    Some(StructureWitness::Regular {
        subgroup_order: h.order(),
        progression: ApCover { modulus: n, start, diff, length },
        increment,
        delta,
    })
}

/// Re-checks a witness against `A` from scratch, using only set primitives.
pub fn verify_witness(a: &CyclicSet, w: &StructureWitness) -> Result<bool> {
    let n = a.modulus();
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let delta = (a.doubled().len() - a.len()) as u64;
    let subgroup = |order: u64| {
        Subgroup::new(n, order)
            .map_err(|_| Error::MalformedWitness(format!("{order} is not a subgroup order of Z_{n}")))
    };
    Ok(match w {
        StructureWitness::DenseCoset { subgroup_order, density, whole_group, constant } => {
            let h = subgroup(*subgroup_order)?;
            let dens = Ratio::new(a.len() as u64, h.order());
            let parts = a.coset_split(&h)?;
            parts.len() == 1
                && Ratio::from(*density) == dens
                && *whole_group == !h.is_proper()
                && Ratio::from(*constant) * dens > Ratio::from_integer(1)
        }
        StructureWitness::Regular { subgroup_order, progression: p, increment, delta: d } => {
            let h = subgroup(*subgroup_order)?;
            if p.modulus != n {
                return Err(Error::MalformedWitness(format!("progression lives in Z_{}, set in Z_{n}", p.modulus)));
            }
            let labels: Vec<u64> = p.terms().map(|t| h.coset_label(t)).collect();
            let mut distinct = labels.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let covered = a.iter().all(|x| labels.contains(&h.coset_label(x)));
            h.is_proper()
                && p.length >= 2
                && distinct.len() as u64 == p.length
                && covered
                && *increment == (p.length - 1) * h.order()
                && *d == delta
                && *increment <= delta
        }
        StructureWitness::Singular { subgroup_order, cosets, increment, delta: d } => {
            let h = subgroup(*subgroup_order)?;
            let m = h.index();
            let mut met: Vec<u64> = a.iter().map(|x| h.coset_label(x)).collect();
            met.sort_unstable();
            met.dedup();
            let mut claimed = cosets.to_vec();
            claimed.sort_unstable();
            // three distinct residues form a progression iff one is the midpoint of the others
            let progression = (0..3).any(|i| {
                let (x, y, z) = (claimed[i], claimed[(i + 1) % 3], claimed[(i + 2) % 3]);
                add_mod(x, x, m) == add_mod(y, z, m)
            });
            h.is_proper()
                && met == claimed
                && !progression
                && *increment == 3 * h.order()
                && *d == delta
                && *increment <= delta
        }
        StructureWitness::LargeIncrement { delta: d, modulus, constant } => {
            *modulus == n && *d == delta && Ratio::from(*constant) * delta >= Ratio::from_integer(n)
        }
    })
}

/// If `φ_L(A)` is rectifiable with `s` elements and `|2A| < 3(1 - 1/s)|A|`, some regular
/// coset progression covers `A`.
pub fn combo_verdict(a: &CyclicSet, l: &Subgroup) -> Result<LemmaVerdict> {
    if l.modulus() != a.modulus() {
        return Err(Error::ModulusMismatch { left: a.modulus(), right: l.modulus() });
    }
    let d = doubling(a)?;
    let image = a.project(l);
    let s = image.len();
    if d.doubled * s >= 3 * (s - 1) * d.size {
        return Ok(LemmaVerdict::vacuous(LemmaId::Combo, ""));
    }
    if !is_rectifiable_bounded(&image, s.max(DEFAULT_SIZE_BOUND))?.rectifiable {
        return Ok(LemmaVerdict::vacuous(LemmaId::Combo, "image not rectifiable"));
    }
    let delta = d.delta as u64;
    let found = subgroups(a.modulus())
        .into_iter()
        .filter(|h| h.is_proper() && h.order() <= delta)
        .filter_map(|h| regular_witness(a, &h, delta))
        .min_by_key(|w| w.priority());
    let mut witness = Witness::subgroup(l.order()).with_set("A", a).with_count("s", s).with_count("|2A|", d.doubled);
    let detail = match &found {
        Some(StructureWitness::Regular { subgroup_order, progression, increment, .. }) => {
            witness = witness.with_count("H", *subgroup_order as i64).with_count("|P|", progression.length as i64);
            format!("|H|={subgroup_order} |P|={} increment={increment} delta={delta}", progression.length)
        }
        _ => format!("no regular coset progression with increment <= {delta}"),
    };
    Ok(LemmaVerdict::checked(LemmaId::Combo, found.is_some(), witness, detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::units;
    use proptest::prelude::*;

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(n, e).unwrap()
    }

    fn frac(num: u64, den: u64) -> Fraction {
        Fraction { num, den }
    }

    #[test]
    fn doubling_examples() {
        let d = doubling(&set(12, &[0, 3, 6, 9])).unwrap();
        assert_eq!((d.size, d.doubled, d.ratio, d.delta), (4, 4, frac(1, 1), 0));
        let d = doubling(&set(12, &[0, 1, 5])).unwrap();
        assert_eq!((d.size, d.doubled, d.ratio, d.delta), (3, 6, frac(2, 1), 3));
        let d = doubling(&set(12, &[0, 1])).unwrap();
        assert_eq!((d.size, d.doubled, d.ratio, d.delta), (2, 3, frac(3, 2), 1));
        assert!(doubling(&CyclicSet::empty(3)).is_err());
    }

    #[test]
    fn witness_examples() {
        let c = Constants::default();
        let r = find_witness(&set(12, &[0, 3, 6, 9]), &c, Mode::Main).unwrap();
        assert_eq!(r.best_variant(), "DenseCoset");
        assert!(matches!(
            r.best,
            Some(StructureWitness::DenseCoset { subgroup_order: 4, density, whole_group: false, .. }) if density == frac(1, 1)
        ));

        let r = find_witness(&set(12, &[0, 1]), &c, Mode::Main).unwrap();
        let best = r.best.clone().unwrap();
        assert_eq!(
            best,
            StructureWitness::Regular {
                subgroup_order: 1,
                progression: ApCover { modulus: 12, start: 0, diff: 1, length: 2 },
                increment: 1,
                delta: 1
            }
        );
        assert!(verify_witness(&set(12, &[0, 1]), &best).unwrap());

        // the singular configuration is found, but H of order 3 also gives a two-term
        // regular cover with the same increment, and regular witnesses take priority
        let r = find_witness(&set(12, &[0, 1, 5]), &c, Mode::Main).unwrap();
        assert!(r.witnesses.contains(&StructureWitness::Singular {
            subgroup_order: 1,
            cosets: [0, 1, 5],
            increment: 3,
            delta: 3
        }));
        assert!(matches!(r.best, Some(StructureWitness::Regular { subgroup_order: 3, increment: 3, .. })));
    }

    #[test]
    fn tightness_example() {
        let n = 130_000;
        let a = set(n, &[n - 1, 0, 1, 10]);
        let r = find_witness(&a, &Constants::default(), Mode::Main).unwrap();
        assert_eq!(r.doubling.doubled, 9);
        assert_eq!(r.doubling.ratio, frac(9, 4));
        assert!(!r.hypothesis_holds);
        assert!(r.witnesses.is_empty());
        assert_eq!(r.best_variant(), "None");
    }

    #[test]
    fn tampered_witnesses() {
        let a = set(12, &[0, 1, 2]);
        let w = StructureWitness::Regular {
            subgroup_order: 1,
            progression: ApCover { modulus: 12, start: 0, diff: 1, length: 2 },
            increment: 1,
            delta: 2,
        };
        assert!(!verify_witness(&a, &w).unwrap());
        let ok = StructureWitness::Regular {
            subgroup_order: 1,
            progression: ApCover { modulus: 12, start: 0, diff: 1, length: 3 },
            increment: 2,
            delta: 2,
        };
        assert!(verify_witness(&a, &ok).unwrap());
        // {0, 1, 2} meets three cosets in progression
        let bad = StructureWitness::Singular { subgroup_order: 1, cosets: [0, 1, 2], increment: 3, delta: 2 };
        assert!(!verify_witness(&a, &bad).unwrap());
        let a = set(24, &[0, 1, 2, 12, 13, 14]);
        let bad = StructureWitness::Singular { subgroup_order: 2, cosets: [0, 1, 2], increment: 6, delta: 6 };
        assert!(!verify_witness(&a, &bad).unwrap());
        let wrong_h = StructureWitness::DenseCoset {
            subgroup_order: 5,
            density: frac(1, 1),
            whole_group: false,
            constant: frac(1, 1),
        };
        assert!(verify_witness(&a, &wrong_h).is_err());
    }

    #[test]
    fn aux_mode() {
        // {0, 1, 3} generates Z_7 and |2A| = 6 < 7
        let a = set(7, &[0, 1, 3]);
        let r = find_witness(&a, &Constants::default(), Mode::Aux).unwrap();
        assert!(r.hypothesis_holds);
        assert!(r.witnesses.iter().all(|w| w.variant() != "DenseCoset"));
        assert!(r.witnesses.iter().any(|w| w.variant() == "Singular"));
        assert_eq!(r.best_variant(), "Regular");
        let loose = Constants::from_overrides(None, Some(4)).unwrap();
        let r = find_witness(&a, &loose, Mode::Aux).unwrap();
        assert!(r.witnesses.iter().any(|w| w.variant() == "LargeIncrement"));
    }

    #[test]
    fn constants() {
        let c = Constants::from_overrides(Some(5), None).unwrap();
        assert_eq!(c.c0, frac(4, 1));
        assert!(Constants::from_overrides(Some(30_000), Some(24_000)).is_ok());
        assert!(Constants::from_overrides(Some(30_000), Some(20_000)).is_err());
        assert!(Constants::from_overrides(Some(0), None).is_err());
        // C = 1 never admits a dense coset
        let c1 = Constants::from_overrides(Some(1), None).unwrap();
        let r = find_witness(&set(12, &[0, 3, 6, 9]), &c1, Mode::Main).unwrap();
        assert!(r.witnesses.iter().all(|w| w.variant() != "DenseCoset"));
    }

    #[test]
    fn combo_examples() {
        let a = set(12, &[0, 1, 2]);
        let v = combo_verdict(&a, &Subgroup::trivial(12)).unwrap();
        assert!(v.hypothesis_holds && v.conclusion_holds);
        assert_eq!(v.detail, "|H|=1 |P|=3 increment=2 delta=2");
        let v = combo_verdict(&a, &Subgroup::full(12)).unwrap();
        assert!(!v.hypothesis_holds);
    }

    fn shape(r: &WitnessSearch) -> Vec<(&'static str, Option<u64>, Option<u64>)> {
        let mut v: Vec<_> = r
            .witnesses
            .iter()
            .map(|w| {
                let len = match w {
                    StructureWitness::Regular { progression, .. } => Some(progression.length),
                    _ => None,
                };
                (w.variant(), w.subgroup_order(), len)
            })
            .collect();
        v.sort();
        v
    }

    proptest! {
        #[test]
        fn affine_invariance(n in 2u64..40, raw in prop::collection::vec(0u64..1000, 1..9), g in 0u64..1000, ui in 0usize..50) {
            let a = CyclicSet::from_residues(n, raw);
            let us = units(n);
            let b = a.dilate(us[ui % us.len()]).translate(g % n);
            let c = Constants::default();
            for mode in [Mode::Main, Mode::Aux] {
                let ra = find_witness(&a, &c, mode).unwrap();
                let rb = find_witness(&b, &c, mode).unwrap();
                prop_assert_eq!(shape(&ra), shape(&rb));
                prop_assert_eq!(ra.hypothesis_holds, rb.hypothesis_holds);
                for w in &ra.witnesses {
                    prop_assert!(verify_witness(&a, w).unwrap());
                }
            }
        }
    }
}
