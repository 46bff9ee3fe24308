//! Elementary pairs and Kemperman's structure theorem.

use serde::Serialize;

use super::verdict::{LemmaId, LemmaVerdict, Witness};
use crate::cyclic::{add_mod, ap_start_with_diff, element_order, is_ap, subgroups, CyclicSet, Subgroup};
use crate::error::{Error, Result};
use crate::rectify::{is_rectifiable_bounded, DEFAULT_SIZE_BOUND};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

/// Kemperman's four elementary pair types.
///
/// Type III: `A = g1 + (H1 ∪ {0})`, `B = g2 - (H2 ∪ {0})` with `H = H1 ∪ H2 ∪ {0}` a partition
/// and `c = g1 + g2` the only element of `A+B` with a unique representation.
/// Type IV: `A = g1 + H1`, `B = g2 - H2` with `H = H1 ∪ H2` a partition into aperiodic parts
/// and every element of `A+B` represented at least twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum ElementaryType {
    I {
        singleton: Side,
    },
    II {
        diff: u64,
        diff_order: u64,
    },
    III {
        subgroup_order: u64,
        g1: u64,
        g2: u64,
        h1: CyclicSet,
        h2: CyclicSet,
        c: u64,
    },
    IV {
        subgroup_order: u64,
        g1: u64,
        g2: u64,
        h1: CyclicSet,
        h2: CyclicSet,
    },
    #[serde(rename = "NONE")]
    None,
}

impl ElementaryType {
    pub fn tag(&self) -> &'static str {
        match self {
            ElementaryType::I { .. } => "I",
            ElementaryType::II { .. } => "II",
            ElementaryType::III { .. } => "III",
            ElementaryType::IV { .. } => "IV",
            ElementaryType::None => "NONE",
        }
    }

    pub fn is_elementary(&self) -> bool {
        !matches!(self, ElementaryType::None)
    }
}

/// Number of representations `a + b` of each element of `A + B`, ascending by element.
pub fn representation_counts(a: &CyclicSet, b: &CyclicSet) -> Result<Vec<(u64, usize)>> {
    a.check_same(b)?;
    let n = a.modulus();
    let mut sums: Vec<u64> = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            sums.push(add_mod(x, y, n));
        }
    }
    sums.sort_unstable();
    Ok(sums.chunk_by(|p, q| p == q).map(|c| (c[0], c.len())).collect())
}

/// `g - S`.
fn reflect(s: &CyclicSet, g: u64) -> CyclicSet {
    s.negate().translate(g)
}

/// First matching type in the order I, II, III, IV.
pub fn elementary_type(a: &CyclicSet, b: &CyclicSet) -> Result<ElementaryType> {
    a.check_same(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.len() == 1 {
        return Ok(ElementaryType::I { singleton: Side::A });
    }
    if b.len() == 1 {
        return Ok(ElementaryType::I { singleton: Side::B });
    }
    let n = a.modulus();
    let total = (a.len() + b.len()) as u64;
    for d in 1..n {
        let order = element_order(d, n);
        if order + 1 >= total && ap_start_with_diff(a, d).is_some() && ap_start_with_diff(b, d).is_some() {
            return Ok(ElementaryType::II { diff: d, diff_order: order });
        }
    }
    if let Some(t) = type_three(a, b, total - 1)? {
        return Ok(t);
    }
    if let Some(t) = type_four(a, b, total)? {
        return Ok(t);
    }
    Ok(ElementaryType::None)
}

fn type_three(a: &CyclicSet, b: &CyclicSet, order: u64) -> Result<Option<ElementaryType>> {
    let n = a.modulus();
    if !n.is_multiple_of(order) {
        return Ok(None);
    }
    let h = Subgroup::new(n, order)?;
    if !a.in_single_coset(&h) || !b.in_single_coset(&h) {
        return Ok(None);
    }
    let hs = h.elements();
    let zero = CyclicSet::from_residues(n, [0]);
    let counts = representation_counts(a, b)?;
    for g1 in a.iter() {
        let h1 = a.translate(n - g1).without(&zero)?;
        let h2 = hs.without(&h1)?.without(&zero)?;
        if h2.is_empty() {
            continue;
        }
        let target = h2.union(&zero)?;
        for g2 in b.iter() {
            if reflect(b, g2) != target {
                continue;
            }
            let c = add_mod(g1, g2, n);
            let unique_only_at_c = counts.iter().all(|&(x, k)| (k == 1) == (x == c));
            if unique_only_at_c {
                return Ok(Some(ElementaryType::III { subgroup_order: order, g1, g2, h1, h2, c }));
            }
        }
    }
    Ok(None)
}

fn type_four(a: &CyclicSet, b: &CyclicSet, order: u64) -> Result<Option<ElementaryType>> {
    let n = a.modulus();
    if !n.is_multiple_of(order) {
        return Ok(None);
    }
    let h = Subgroup::new(n, order)?;
    if !a.in_single_coset(&h) || !b.in_single_coset(&h) {
        return Ok(None);
    }
    if representation_counts(a, b)?.iter().any(|&(_, k)| k < 2) {
        return Ok(None);
    }
    // shifting g1 by an element of H shifts H1, H2 and g2 together, so g1 = min A loses nothing
    let g1 = a.min().unwrap();
    let h1 = a.translate(n - g1);
    let h2 = h.elements().without(&h1)?;
    if h1.is_periodic() || h2.is_periodic() {
        return Ok(None);
    }
    let b0 = b.min().unwrap();
    for k in 0..order {
        let g2 = add_mod(b0, k * h.index(), n);
        if reflect(b, g2) == h2 {
            return Ok(Some(ElementaryType::IV { subgroup_order: order, g1, g2, h1, h2 }));
        }
    }
    Ok(None)
}

/// Rebuilds the pair from the witness fields of `t` and checks every defining condition.
pub fn verify_elementary(a: &CyclicSet, b: &CyclicSet, t: &ElementaryType) -> Result<bool> {
    a.check_same(b)?;
    let n = a.modulus();
    let zero = CyclicSet::from_residues(n, [0]);
    let partition = |parts: &[&CyclicSet], order: u64| -> Result<bool> {
        let h = Subgroup::new(n, order)?.elements();
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let mut union = CyclicSet::empty(n);
        for p in parts {
            if p.modulus() != n || p.is_empty() {
                return Ok(false);
            }
            union = union.union(p)?;
        }
        Ok(union == h && total == h.len())
    };
    Ok(match t {
        ElementaryType::I { singleton: Side::A } => a.len() == 1,
        ElementaryType::I { singleton: Side::B } => b.len() == 1,
        ElementaryType::II { diff, diff_order } => {
            let progression = |s: &CyclicSet| match s.min() {
                Some(_) => s.iter().any(|x0| (0..s.len() as u64).all(|i| s.contains(add_mod(x0, i * diff % n, n)))),
                None => false,
            };
            *diff_order == element_order(*diff, n)
                && *diff_order as usize + 1 >= a.len() + b.len()
                && progression(a)
                && progression(b)
        }
        ElementaryType::III { subgroup_order, g1, g2, h1, h2, c } => {
            let counts = representation_counts(a, b)?;
            partition(&[h1, h2, &zero], *subgroup_order)?
                && *a == h1.union(&zero)?.translate(*g1)
                && *b == reflect(&h2.union(&zero)?, *g2)
                && *c == add_mod(*g1, *g2, n)
                && counts.iter().all(|&(x, k)| (k == 1) == (x == *c))
        }
        ElementaryType::IV { subgroup_order, g1, g2, h1, h2 } => {
            let counts = representation_counts(a, b)?;
            partition(&[h1, h2], *subgroup_order)?
                && !h1.is_periodic()
                && !h2.is_periodic()
                && *a == h1.translate(*g1)
                && *b == reflect(h2, *g2)
                && counts.iter().all(|&(_, k)| k >= 2)
        }
        ElementaryType::None => false,
    })
}

/// Soundness of [`elementary_type`]: a reported type is rebuilt from its witness, and the
/// pair satisfies `|A+B| <= |A|+|B|-1` as every elementary pair does.
pub fn elementary_verdict(a: &CyclicSet, b: &CyclicSet) -> Result<LemmaVerdict> {
    let t = elementary_type(a, b)?;
    if !t.is_elementary() {
        return Ok(LemmaVerdict::vacuous(LemmaId::ElementaryType, "NONE"));
    }
    let s = a.sumset_unchecked(b);
    let ok = verify_elementary(a, b, &t)? && s.len() < a.len() + b.len();
    let witness = Witness::default().with_set("A", a).with_set("B", b).with_count("|A+B|", s.len());
    Ok(LemmaVerdict::checked(LemmaId::ElementaryType, ok, witness, t.tag()))
}

fn small_sum_hypothesis(a: &CyclicSet, b: &CyclicSet, s: &CyclicSet) -> bool {
    s.len() < a.len() + b.len()
}

/// Kemperman: when `|A+B| <= |A|+|B|-1` and either `A+B ≠ Z_n` or some element of `A+B`
/// has a unique representation, some proper subgroup `H` satisfies
/// `|C+H| - |C| <= |H| - 1` for `C ∈ {A, B, A+B}` and `(φ_H(A), φ_H(B))` is elementary.
/// The trivial group is excluded.
pub fn kemperman_verdict(a: &CyclicSet, b: &CyclicSet) -> Result<LemmaVerdict> {
    a.check_same(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.modulus();
    if n == 1 {
        return Ok(LemmaVerdict::vacuous(LemmaId::Kemperman, "trivial group has no proper subgroup"));
    }
    let s = a.sumset_unchecked(b);
    let escape = (s.len() as u64) < n || representation_counts(a, b)?.iter().any(|&(_, k)| k == 1);
    if !(small_sum_hypothesis(a, b, &s) && escape) {
        return Ok(LemmaVerdict::vacuous(LemmaId::Kemperman, ""));
    }
    for h in subgroups(n).into_iter().filter(Subgroup::is_proper) {
        let tight = |c: &CyclicSet| -> Result<bool> { Ok(c.plus_subgroup(&h)?.len() < c.len() + h.order() as usize) };
        if !(tight(a)? && tight(b)? && tight(&s)?) {
            continue;
        }
        let t = elementary_type(&a.project(&h), &b.project(&h))?;
        if t.is_elementary() {
            let witness = Witness::subgroup(h.order()).with_set("A", a).with_set("B", b).with_count("|A+B|", s.len());
            return Ok(LemmaVerdict::checked(
                LemmaId::Kemperman,
                true,
                witness,
                format!("quotient pair of type {}", t.tag()),
            ));
        }
    }
    let witness = Witness::default().with_set("A", a).with_set("B", b).with_count("|A+B|", s.len());
    Ok(LemmaVerdict::checked(
        LemmaId::Kemperman,
        false,
        witness,
        "no proper subgroup gives an elementary quotient pair",
    ))
}

/// If `|A+B| <= |A|+|B|-1`, `|A|+|B| <= n-1`, both sets have at least two elements and `B`
/// is rectifiable, not a progression and not in a proper coset, then some nonzero proper
/// subgroup `H` has `B` meeting exactly two `H`-cosets with `(|H|+1)/2` elements in each.
pub fn kemp_lemma_verdict(a: &CyclicSet, b: &CyclicSet) -> Result<LemmaVerdict> {
    a.check_same(b)?;
    let n = a.modulus() as usize;
    let (sa, sb) = (a.len(), b.len());
    let cheap = sa.min(sb) >= 2 && sa + sb < n && !b.in_proper_coset() && is_ap(b).is_none();
    if !cheap || !small_sum_hypothesis(a, b, &a.sumset_unchecked(b)) {
        return Ok(LemmaVerdict::vacuous(LemmaId::KempLemma, ""));
    }
    if !is_rectifiable_bounded(b, sb.max(DEFAULT_SIZE_BOUND))?.rectifiable {
        return Ok(LemmaVerdict::vacuous(LemmaId::KempLemma, "B not rectifiable"));
    }
    let found = subgroups(a.modulus()).into_iter().find(|h| {
        let ho = h.order() as usize;
        h.is_proper()
            && !h.is_trivial()
            && ho % 2 == 1
            && b.cosets_met(h) == 2
            && b.coset_split(h).is_ok_and(|parts| parts.iter().all(|p| 2 * p.part.len() == ho + 1))
    });
    let witness =
        Witness { subgroup_order: found.map(|h| h.order()), ..Default::default() }.with_set("A", a).with_set("B", b);
    Ok(LemmaVerdict::checked(LemmaId::KempLemma, found.is_some(), witness, ""))
}
