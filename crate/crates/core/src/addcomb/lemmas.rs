//! Auxiliary sumset lemmas: coset sum bounds, unique differences, Freiman's
//! `3k-3` theorem, three-element sets and the `α`-lemma.

use num::Integer;
use serde::Serialize;

use super::verdict::{LemmaId, LemmaVerdict, Witness};
use crate::cyclic::{add_mod, element_order, is_ap, sub_mod, CyclicSet, Subgroup};
use crate::error::{Error, Result};

/// For `A` inside one `K`-coset with `|A| >= |K|/2`:
/// (i) `|B| > |K|-|A|` implies `|A+B| >= |K|`;
/// (ii) `|B| > 2(|K|-|A|)` implies `B` lies in one `K`-coset or `|A+B| >= |A|+|K|`.
///
/// A failed precondition is reported as a false hypothesis.
pub fn coset_sum_bounds(a: &CyclicSet, b: &CyclicSet, k: &Subgroup) -> Result<LemmaVerdict> {
    a.check_same(b)?;
    if k.modulus() != a.modulus() {
        return Err(Error::ModulusMismatch { left: a.modulus(), right: k.modulus() });
    }
    let (sa, sb, sk) = (a.len(), b.len(), k.order() as usize);
    let pre = sa > 0 && sb > 0 && a.in_single_coset(k) && 2 * sa >= sk;
    if !pre || sb + sa <= sk {
        return Ok(LemmaVerdict::vacuous(LemmaId::CosetSumBounds, if pre { "" } else { "precondition fails" }));
    }
    let ss = a.sumset_unchecked(b).len();
    let part_i = ss >= sk;
    let part_ii_active = sb + 2 * sa > 2 * sk;
    let part_ii = !part_ii_active || b.in_single_coset(k) || ss >= sa + sk;
    let witness = Witness::subgroup(k.order())
        .with_set("A", a)
        .with_set("B", b)
        .with_count("|A+B|", ss)
        .with_count("part_ii_active", part_ii_active as i64);
    Ok(LemmaVerdict::checked(
        LemmaId::CosetSumBounds,
        part_i && part_ii,
        witness,
        format!("|A|={sa} |B|={sb} |K|={sk} |A+B|={ss}"),
    ))
}

fn difference_counts(a: &CyclicSet) -> Vec<(u64, usize)> {
    let n = a.modulus();
    let elems = a.elements();
    let mut diffs: Vec<u64> = Vec::with_capacity(elems.len() * elems.len());
    for &x in &elems {
        for &y in &elems {
            diffs.push(sub_mod(x, y, n));
        }
    }
    diffs.sort_unstable();
    diffs.chunk_by(|p, q| p == q).map(|c| (c[0], c.len())).collect()
}

/// Number of group elements with exactly one representation `a - b`, `a, b ∈ A`.
pub fn unique_differences(a: &CyclicSet) -> usize {
    difference_counts(a).iter().filter(|&&(_, r)| r == 1).count()
}

/// If `|2A| <= 3|A| - 4`, at most `|A|^2/4` elements have a unique representation as `a - b`.
///
/// The sub-verdict checks the graph on `A` joining `a, b` when `a - b` is uniquely
/// represented: it must be triangle-free with at most `|A|^2/4` edges. Each edge accounts
/// for the two elements `±(a - b)`, so the graph form only bounds the element count by
/// `|A|^2/2`.
pub fn mantel_verdict(a: &CyclicSet) -> Result<LemmaVerdict> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let size = a.len();
    let doubled = a.doubled().len();
    if doubled + 4 > 3 * size {
        return Ok(
            LemmaVerdict::vacuous(LemmaId::Mantel, "").with_subs(vec![LemmaVerdict::vacuous(LemmaId::MantelGraph, "")])
        );
    }
    let n = a.modulus();
    let counts = difference_counts(a);
    let count = counts.iter().filter(|&&(_, r)| r == 1).count();
    let unique = |x: u64| counts.binary_search_by_key(&x, |&(d, _)| d).is_ok_and(|i| counts[i].1 == 1);
    let elems = a.elements();
    let adjacent = |i: usize, j: usize| unique(sub_mod(elems[i], elems[j], n));
    let mut edges = 0;
    let mut triangle = false;
    for i in 0..size {
        for j in i + 1..size {
            if adjacent(i, j) {
                edges += 1;
                triangle |= (j + 1..size).any(|k| adjacent(i, k) && adjacent(j, k));
            }
        }
    }
    let graph = LemmaVerdict::checked(
        LemmaId::MantelGraph,
        !triangle && 4 * edges <= size * size,
        Witness::default().with_count("edges", edges).with_count("triangle", triangle as i64),
        format!("edges={edges} triangle={triangle}"),
    );
    let witness =
        Witness::default().with_set("A", a).with_count("unique_differences", count).with_count("|2A|", doubled);
    Ok(LemmaVerdict::checked(
        LemmaId::Mantel,
        4 * count <= size * size,
        witness,
        format!("|A|={size} |2A|={doubled} unique={count}"),
    )
    .with_subs(vec![graph]))
}

const INTEGER_BOUND: i64 = 1 << 30;

/// Length of the shortest integer progression containing `set` (sorted, deduplicated).
fn shortest_integer_ap(set: &[i64]) -> u64 {
    match set {
        [] => 0,
        [_] => 1,
        [first, rest @ ..] => {
            // any progression through A has a difference dividing every gap,
            // so the gcd of the gaps gives the shortest one
            let g = rest.iter().fold(0i64, |g, &x| g.gcd(&(x - first)));
            ((set[set.len() - 1] - first) / g) as u64 + 1
        }
    }
}

/// Freiman's `3k-3` theorem over the integers: if `A` is not contained in an `l`-term
/// progression then `|2A| >= min(l, 2|A|-3) + |A|`.
pub fn freiman_3n3_verdict(a: &[i64], l: u64) -> Result<LemmaVerdict> {
    if let Some(&x) = a.iter().find(|x| x.abs() > INTEGER_BOUND) {
        return Err(Error::MagnitudeOverBound(x));
    }
    let mut set = a.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if l == 0 {
        return Err(Error::InvalidParameter("progression length must be at least 1".into()));
    }
    let shortest = shortest_integer_ap(&set);
    if shortest <= l {
        return Ok(LemmaVerdict::vacuous(LemmaId::Freiman3n3, format!("contained in a {shortest}-term progression")));
    }
    let mut sums: Vec<i64> = Vec::with_capacity(set.len() * set.len());
    for (i, &x) in set.iter().enumerate() {
        for &y in &set[i..] {
            sums.push(x + y);
        }
    }
    sums.sort_unstable();
    sums.dedup();
    let size = set.len() as i64;
    let bound = (l as i64).min(2 * size - 3) + size;
    let witness = Witness::default()
        .with_count("|A|", size)
        .with_count("|2A|", sums.len())
        .with_count("l", l as i64)
        .with_count("shortest_progression", shortest as i64);
    Ok(LemmaVerdict::checked(
        LemmaId::Freiman3n3,
        sums.len() as i64 >= bound,
        witness,
        format!("|A|={size} |2A|={} bound={bound}", sums.len()),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleCase {
    /// Coset of the three-element subgroup.
    I,
    /// Three-term progression whose difference has order at least 4.
    II,
    /// `{a, a+d, b}` with `d` the involution and `2b != 2a + d`.
    III,
    /// Anything else.
    IV,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleClass {
    pub case: TripleCase,
    pub predicted_doubling: usize,
    pub actual_doubling: usize,
}

impl TripleClass {
    pub fn prediction_holds(&self) -> bool {
        self.predicted_doubling == self.actual_doubling
    }
}

/// Classifies a three-element subset of `Z_n`; the predicted `|2A|` comes from the case
/// alone, the actual one from the sumset.
pub fn classify_triple(a: &CyclicSet) -> Result<TripleClass> {
    if a.len() != 3 {
        return Err(Error::WrongCardinality { expected: 3, actual: a.len() });
    }
    let n = a.modulus();
    let e = a.elements();
    let (case, predicted) = if n.is_multiple_of(3) && a.translate(n - e[0]) == Subgroup::new(n, 3)?.elements() {
        (TripleCase::I, 3)
    } else if let Some(d) = triple_ap_difference(n, &e) {
        (TripleCase::II, if element_order(d, n) == 4 { 4 } else { 5 })
    } else if involution_split(n, &e) {
        (TripleCase::III, 5)
    } else {
        (TripleCase::IV, 6)
    };
    Ok(TripleClass { case, predicted_doubling: predicted, actual_doubling: a.doubled().len() })
}

// some element is the midpoint of the other two
fn triple_ap_difference(n: u64, e: &[u64]) -> Option<u64> {
    (0..3).find_map(|m| {
        let (x, y) = (e[(m + 1) % 3], e[(m + 2) % 3]);
        (add_mod(e[m], e[m], n) == add_mod(x, y, n)).then(|| sub_mod(e[m], x, n))
    })
}

fn involution_split(n: u64, e: &[u64]) -> bool {
    if !n.is_multiple_of(2) {
        return false;
    }
    let d = n / 2;
    (0..3).any(|i| {
        let (a, a2, b) = (e[i], e[(i + 1) % 3], e[(i + 2) % 3]);
        sub_mod(a2, a, n) == d && add_mod(b, b, n) != add_mod(add_mod(a, a, n), d, n)
    })
}

/// Verdict form of [`classify_triple`]: the case prediction must match `|2A|`.
pub fn triple_verdict(a: &CyclicSet) -> Result<LemmaVerdict> {
    let c = classify_triple(a)?;
    let witness = Witness::default()
        .with_set("A", a)
        .with_count("predicted", c.predicted_doubling)
        .with_count("actual", c.actual_doubling);
    Ok(LemmaVerdict::checked(LemmaId::TripleClassification, c.prediction_holds(), witness, format!("{:?}", c.case)))
}

/// The `α`-lemma on an ordered triple `(α1, α2, α3)` in `Z_n` and an element `β`.
///
/// Precondition: all six sums `αi + αj` (`i <= j`) are distinct and `β ∉ {α}`.
/// Hypothesis: `β = αi + αj - α1 = αk + αl - α2` for some indices.
/// Conclusion: `{α1, α2, α3, β}` is a 4-term progression, or `{α1, α2, β}` is a coset of
/// the 3-element subgroup.
pub fn alpha_verdict(n: u64, alphas: [u64; 3], beta: u64) -> Result<LemmaVerdict> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if let Some(&x) = alphas.iter().chain(std::iter::once(&beta)).find(|&&x| x >= n) {
        return Err(Error::OutOfRange { element: x, modulus: n });
    }
    let mut sums = Vec::with_capacity(6);
    for i in 0..3 {
        for j in i..3 {
            sums.push(add_mod(alphas[i], alphas[j], n));
        }
    }
    sums.sort_unstable();
    let distinct = sums.windows(2).all(|w| w[0] != w[1]);
    if !distinct || alphas.contains(&beta) {
        return Ok(LemmaVerdict::vacuous(LemmaId::Alpha, "precondition fails"));
    }
    let hits = |base: u64| (0..3).any(|i| (i..3).any(|j| sub_mod(add_mod(alphas[i], alphas[j], n), base, n) == beta));
    if !(hits(alphas[0]) && hits(alphas[1])) {
        return Ok(LemmaVerdict::vacuous(LemmaId::Alpha, ""));
    }
    let four = CyclicSet::new(n, &[alphas[0], alphas[1], alphas[2], beta])?;
    let progression = is_ap(&four).is_some();
    let three = CyclicSet::new(n, &[alphas[0], alphas[1], beta])?;
    let coset = n.is_multiple_of(3) && three.translate(n - alphas[0]) == Subgroup::new(n, 3)?.elements();
    let witness = Witness::default()
        .with_set("alpha_beta", &four)
        .with_count("alpha1", alphas[0] as i64)
        .with_count("alpha2", alphas[1] as i64)
        .with_count("alpha3", alphas[2] as i64)
        .with_count("beta", beta as i64);
    Ok(LemmaVerdict::checked(
        LemmaId::Alpha,
        progression || coset,
        witness,
        format!("progression={progression} coset={coset}"),
    ))
}
