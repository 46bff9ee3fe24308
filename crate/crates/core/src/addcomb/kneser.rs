//! Kneser's theorem and the very-small-doubling lemmas built on it.

use super::verdict::{LemmaId, LemmaVerdict, Witness};
use crate::cyclic::{subgroups, CyclicSet, Subgroup};
use crate::error::{Error, Result};

fn nonempty_pair(a: &CyclicSet, b: &CyclicSet) -> Result<()> {
    a.check_same(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

/// `|2A| < 3/2 |A|`.
pub fn is_vsds_set(a: &CyclicSet) -> bool {
    2 * a.doubled().len() < 3 * a.len()
}

fn is_subgroup_set(s: &CyclicSet) -> Option<Subgroup> {
    let h = Subgroup::new(s.modulus(), s.len() as u64).ok()?;
    (h.elements() == *s).then_some(h)
}

/// Checks the VSDS characterization on `a`: `a` is a VSDS exactly when it lies in a
/// coset of some subgroup `H` with `|A| > 2/3 |H|`, and then `H = A - A` and `2A` is an
/// `H`-coset. The `vsds` count in the witness records which side of the equivalence holds.
pub fn is_vsds(a: &CyclicSet) -> Result<LemmaVerdict> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.modulus();
    let size = a.len() as u64;
    let doubled = a.doubled();
    let vsds = 2 * doubled.len() < 3 * a.len();
    let dense_coset = subgroups(n).into_iter().find(|h| a.in_single_coset(h) && 3 * size > 2 * h.order());
    let mut ok = vsds == dense_coset.is_some();
    let mut witness =
        Witness::default().with_set("A", a).with_count("vsds", vsds as i64).with_count("|2A|", doubled.len());
    if vsds {
        let diff = a.difference_set(a)?;
        match is_subgroup_set(&diff) {
            Some(h) => {
                witness.subgroup_order = Some(h.order());
                ok &= a.in_single_coset(&h)
                    && 3 * size > 2 * h.order()
                    && doubled.len() as u64 == h.order()
                    && doubled.in_single_coset(&h);
            }
            None => {
                ok = false;
                witness = witness.with_set("A-A", &diff);
            }
        }
    }
    let detail = format!("|A|={size}, |2A|={}, vsds={vsds}", doubled.len());
    Ok(LemmaVerdict::checked(LemmaId::Vsds, ok, witness, detail))
}

/// Kneser: when `|A+B| <= |A|+|B|-1`, with `H = π(A+B)`,
/// `|A+B| = |A+H| + |B+H| - |H|`, and `A+B` is periodic if the inequality is strict
/// by more than one. The general bound `|A+B| >= |A|+|B|-|H|` is checked alongside.
pub fn kneser_verdict(a: &CyclicSet, b: &CyclicSet) -> Result<LemmaVerdict> {
    nonempty_pair(a, b)?;
    let s = a.sumset_unchecked(b);
    let (sa, sb, ss) = (a.len(), b.len(), s.len());
    if ss + 1 > sa + sb {
        return Ok(LemmaVerdict::vacuous(LemmaId::Kneser, ""));
    }
    let h = s.stabilizer();
    let ho = h.order() as usize;
    let (ah, bh) = if h.is_trivial() { (sa, sb) } else { (a.plus_subgroup(&h)?.len(), b.plus_subgroup(&h)?.len()) };
    let bound = ss + ho >= sa + sb;
    let equality = ss + ho == ah + bh;
    let periodic = ss + 1 >= sa + sb || ho > 1;
    let witness = Witness::subgroup(h.order())
        .with_set("A", a)
        .with_set("B", b)
        .with_count("|A+B|", ss)
        .with_count("|A+H|", ah)
        .with_count("|B+H|", bh);
    let detail = format!("|A|={sa} |B|={sb} |A+B|={ss} |H|={ho} |A+H|={ah} |B+H|={bh}");
    Ok(LemmaVerdict::checked(LemmaId::Kneser, bound && equality && periodic, witness, detail))
}

/// Olson: `|A+B| >= |A| + |B|/2`, or `B` lies in one coset of `π(A+B)`.
pub fn olson_verdict(a: &CyclicSet, b: &CyclicSet) -> Result<LemmaVerdict> {
    nonempty_pair(a, b)?;
    let s = a.sumset_unchecked(b);
    if 2 * s.len() >= 2 * a.len() + b.len() {
        return Ok(LemmaVerdict::vacuous(LemmaId::Olson, ""));
    }
    let h = s.stabilizer();
    let ok = b.in_single_coset(&h);
    let witness = Witness::subgroup(h.order()).with_set("A", a).with_set("B", b).with_count("|A+B|", s.len());
    Ok(LemmaVerdict::checked(LemmaId::Olson, ok, witness, format!("|A+B|={} |H|={}", s.len(), h.order())))
}

/// Consolidation: if `|A+B| < 2 min(|B|, 3/4 |A|)` then, with `H = π(A+B)`,
/// `|A| > 2/3 |H|`, `|B| > 1/2 |H|`, both sets lie in single `H`-cosets and `A+B`
/// is an `H`-coset.
///
/// Two corollaries are attached as sub-verdicts: the Olson corollary (`|A+B| < |A|+|B|/2`
/// with `|A| <= |B|` forces `B` to be a VSDS with `B - B = H`) and the contrapositive bound
/// for sets `A` that are not VSDS.
pub fn consol_verdict(a: &CyclicSet, b: &CyclicSet) -> Result<LemmaVerdict> {
    nonempty_pair(a, b)?;
    let s = a.sumset_unchecked(b);
    let (sa, sb, ss) = (a.len(), b.len(), s.len());
    let small = ss < 2 * sb && 2 * ss < 3 * sa;
    let mut h_cache = None;
    let mut stab = || *h_cache.get_or_insert_with(|| s.stabilizer());

    let main = if small {
        let h = stab();
        let ho = h.order() as usize;
        let ok = 3 * sa > 2 * ho && 2 * sb > ho && a.in_single_coset(&h) && b.in_single_coset(&h) && ss == ho;
        let witness = Witness::subgroup(h.order()).with_set("A", a).with_set("B", b).with_count("|A+B|", ss);
        LemmaVerdict::checked(LemmaId::Consolidation, ok, witness, format!("|A|={sa} |B|={sb} |A+B|={ss} |H|={ho}"))
    } else {
        LemmaVerdict::vacuous(LemmaId::Consolidation, "")
    };

    let olson_cor = if 2 * ss < 2 * sa + sb && sa <= sb {
        let h = stab();
        let ho = h.order() as usize;
        let b2 = b.doubled();
        let diff = b.difference_set(b)?;
        let ok = 3 * sb > 2 * ho
            && diff == h.elements()
            && b2.len() == ho
            && b2.in_single_coset(&h)
            && 2 * b2.len() < 3 * sb;
        let witness = Witness::subgroup(h.order()).with_set("A", a).with_set("B", b).with_count("|A+B|", ss);
        LemmaVerdict::checked(LemmaId::OlsonCorollary, ok, witness, format!("|B|={sb} |H|={ho} |2B|={}", b2.len()))
    } else {
        LemmaVerdict::vacuous(LemmaId::OlsonCorollary, "")
    };

    let non_vsds = if !is_vsds_set(a) {
        let witness = Witness::default().with_set("A", a).with_set("B", b).with_count("|A+B|", ss);
        LemmaVerdict::checked(LemmaId::NonVsdsBound, !small, witness, format!("|A|={sa} |B|={sb} |A+B|={ss}"))
    } else {
        LemmaVerdict::vacuous(LemmaId::NonVsdsBound, "")
    };

    Ok(main.with_subs(vec![olson_cor, non_vsds]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::addcomb::Outcome;

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(n, e).unwrap()
    }

    #[test]
    fn vsds_examples() {
        let v = is_vsds(&set(10, &[0, 2, 4, 6, 8])).unwrap();
        assert!(v.conclusion_holds);
        assert_eq!(v.witness.as_ref().unwrap().subgroup_order, Some(5));
        assert_eq!(v.witness.unwrap().count("vsds"), Some(1));

        let v = is_vsds(&set(5, &[0, 1])).unwrap();
        assert!(v.conclusion_holds);
        assert_eq!(v.witness.unwrap().count("vsds"), Some(0));

        let v = is_vsds(&set(5, &[0, 1, 2, 3])).unwrap();
        assert!(v.conclusion_holds);
        let w = v.witness.unwrap();
        assert_eq!((w.count("vsds"), w.subgroup_order, w.count("|2A|")), (Some(1), Some(5), Some(5)));

        assert_eq!(is_vsds(&CyclicSet::empty(4)).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn kneser_examples() {
        let a = set(12, &[0, 6]);
        let v = kneser_verdict(&a, &a).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert_eq!(v.witness.unwrap().subgroup_order, Some(2));

        let full = CyclicSet::full(5);
        let v = kneser_verdict(&full, &full).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert_eq!(v.witness.unwrap().subgroup_order, Some(5));

        // |A+B| = 6 > 3 + 3 - 1: the equality branch does not apply
        let a = set(12, &[0, 1, 5]);
        assert_eq!(kneser_verdict(&a, &a).unwrap().outcome(), Outcome::Vacuous);
        assert!(kneser_verdict(&a, &set(6, &[0])).is_err());
    }

    #[test]
    fn olson_examples() {
        assert_eq!(olson_verdict(&set(7, &[0]), &set(7, &[0, 1])).unwrap().outcome(), Outcome::Vacuous);
        // A + B = Z_8 is already large enough
        let v = olson_verdict(&set(8, &[0, 1, 2, 3]), &set(8, &[0, 2, 4, 6])).unwrap();
        assert_eq!(v.outcome(), Outcome::Vacuous);
        let h = set(12, &[0, 4, 8]);
        let v = olson_verdict(&h, &h).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert_eq!(v.witness.unwrap().subgroup_order, Some(3));
    }

    #[test]
    fn consol_examples() {
        let a = set(10, &[0, 2, 4, 6, 8]);
        let v = consol_verdict(&a, &a).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert_eq!(v.witness.as_ref().unwrap().subgroup_order, Some(5));
        assert!(!v.is_violation());

        let a = set(5, &[0, 1, 2, 3]);
        let v = consol_verdict(&a, &a).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert_eq!(v.witness.as_ref().unwrap().subgroup_order, Some(5));

        let a = set(10, &[0, 1]);
        let v = consol_verdict(&a, &a).unwrap();
        assert_eq!(v.outcome(), Outcome::Vacuous);
        // {0,1} is not a VSDS, so the contrapositive bound is exercised and holds
        assert_eq!(v.sub_verdicts[1].outcome(), Outcome::Pass);
        assert!(!v.is_violation());
    }
}
