//! Freiman rectifiability: whether a subset of `Z_n` is isomorphic, as far as pairwise
//! sums go, to a set of integers.
//!
//! Label the elements `s_1 < ... < s_k` and introduce unknowns `x_1, ..., x_k`. Every
//! coincidence `s_i + s_j = s_k + s_l` in `Z_n` becomes a linear equation, and every
//! non-coincidence a linear disequality. Equalities cut out a rational subspace `V`. The
//! set is rectifiable exactly when no disequality functional vanishes identically on `V`,
//! i.e. none lies in the row space of the equations. A model is then any point of `V`
//! avoiding finitely many hyperplanes, scaled to integers.

use num::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::addcomb::{LemmaId, LemmaVerdict, Witness};
use crate::cyclic::{add_mod, subgroups, units, CyclicSet};
use crate::error::{Error, Result};

pub const DEFAULT_SIZE_BOUND: usize = 12;

/// Partition of the index pairs `(i, j)`, `i <= j`, by the value of `s_i + s_j`.
///
/// Pairs are listed lexicographically; `class_of[p]` numbers classes in order of
/// first appearance, so two sets have the same pattern iff the vectors agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumPattern {
    pub size: usize,
    pub class_of: Vec<u32>,
}

impl SumPattern {
    fn from_sums<T: Ord + Copy>(size: usize, sums: impl Iterator<Item = T>) -> Self {
        let sums: Vec<T> = sums.collect();
        let mut order: Vec<usize> = (0..sums.len()).collect();
        order.sort_by_key(|&p| (sums[p], p));
        let mut class_of = vec![0u32; sums.len()];
        // classes are numbered by first appearance: the first pair of each run is its smallest index
        let mut firsts: Vec<(usize, Vec<usize>)> = Vec::new();
        for run in order.chunk_by(|&p, &q| sums[p] == sums[q]) {
            firsts.push((run[0], run.to_vec()));
        }
        firsts.sort_unstable_by_key(|(f, _)| *f);
        for (id, (_, members)) in firsts.iter().enumerate() {
            for &p in members {
                class_of[p] = id as u32;
            }
        }
        SumPattern { size, class_of }
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Classes as lists of index pairs.
    pub fn classes(&self) -> Vec<Vec<(usize, usize)>> {
        let pairs = index_pairs(self.size);
        let mut out = vec![Vec::new(); self.class_count()];
        for (p, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(pairs[p]);
        }
        out
    }
}

fn index_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect()
}

pub fn sum_pattern(s: &CyclicSet) -> Result<SumPattern> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = s.modulus();
    let e = s.elements();
    let sums = index_pairs(e.len()).into_iter().map(|(i, j)| add_mod(e[i], e[j], n));
    Ok(SumPattern::from_sums(e.len(), sums))
}

/// Pattern of a list of integers, indexed in the given order.
pub fn integer_sum_pattern(values: &[i64]) -> SumPattern {
    let sums = index_pairs(values.len()).into_iter().map(|(i, j)| values[i] as i128 + values[j] as i128);
    SumPattern::from_sums(values.len(), sums)
}

/// Two pairs whose sums differ in `Z_n` but are forced equal by the other coincidences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub left: (u64, u64),
    pub right: (u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RectifyVerdict {
    pub rectifiable: bool,
    /// Integer images of the elements in ascending order of the elements.
    pub integer_model: Option<Vec<i64>>,
    pub obstruction: Option<Obstruction>,
}

pub fn is_rectifiable(s: &CyclicSet) -> Result<RectifyVerdict> {
    is_rectifiable_bounded(s, DEFAULT_SIZE_BOUND)
}

pub fn is_rectifiable_bounded(s: &CyclicSet, bound: usize) -> Result<RectifyVerdict> {
    if s.len() > bound {
        return Err(Error::SizeOverBound { size: s.len(), bound });
    }
    let pattern = sum_pattern(s)?;
    let k = pattern.size;
    let classes = pattern.classes();
    let functional = |a: (usize, usize), b: (usize, usize)| {
        let mut row = vec![0i128; k];
        row[a.0] += 1;
        row[a.1] += 1;
        row[b.0] -= 1;
        row[b.1] -= 1;
        row
    };

    let mut space = RowSpace::new(k);
    for class in &classes {
        for &p in &class[1..] {
            space.insert(functional(class[0], p))?;
        }
    }

    let e = s.elements();
    let mut disequalities = Vec::new();
    for (ci, a) in classes.iter().enumerate() {
        for b in &classes[ci + 1..] {
            let f = functional(a[0], b[0]);
            if space.contains(&f)? {
                return Ok(RectifyVerdict {
                    rectifiable: false,
                    integer_model: None,
                    obstruction: Some(Obstruction { left: (e[a[0].0], e[a[0].1]), right: (e[b[0].0], e[b[0].1]) }),
                });
            }
            disequalities.push(f);
        }
    }

    let model = space.generic_point(&disequalities)?;
    if integer_sum_pattern(&model) != pattern {
        return Err(Error::Overflow("rectification model failed validation"));
    }
    Ok(RectifyVerdict { rectifiable: true, integer_model: Some(model), obstruction: None })
}

/// Row space of an integer matrix kept in reduced echelon form with primitive rows.
struct RowSpace {
    width: usize,
    /// `(pivot column, row)`, pivots strictly increasing.
    rows: Vec<(usize, Vec<i128>)>,
}

fn checked_combine(x: &mut [i128], xc: i128, y: &[i128], yc: i128) -> Result<()> {
    for (a, &b) in x.iter_mut().zip(y) {
        let l = a.checked_mul(xc);
        let r = b.checked_mul(yc);
        *a = l.zip(r).and_then(|(l, r)| l.checked_sub(r)).ok_or(Error::Overflow("row reduction"))?;
    }
    Ok(())
}

fn make_primitive(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

impl RowSpace {
    fn new(width: usize) -> Self {
        RowSpace { width, rows: Vec::new() }
    }

    /// Reduces `v` against the current rows; the result is zero iff `v` is in the span.
    fn reduce(&self, mut v: Vec<i128>) -> Result<Vec<i128>> {
        for (pc, row) in &self.rows {
            if v[*pc] != 0 {
                let g = v[*pc].gcd(&row[*pc]);
                let (xc, yc) = (row[*pc] / g, v[*pc] / g);
                checked_combine(&mut v, xc, row, yc)?;
                make_primitive(&mut v);
            }
        }
        Ok(v)
    }

    fn contains(&self, v: &[i128]) -> Result<bool> {
        Ok(self.reduce(v.to_vec())?.iter().all(|&x| x == 0))
    }

    fn insert(&mut self, v: Vec<i128>) -> Result<()> {
        let mut v = self.reduce(v)?;
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return Ok(());
        };
        if v[pc] < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pc] != 0 {
                let g = row[pc].gcd(&v[pc]);
                let (xc, yc) = (v[pc] / g, row[pc] / g);
                checked_combine(row, xc, &v, yc)?;
                make_primitive(row);
            }
        }
        let at = self.rows.partition_point(|(c, _)| *c < pc);
        self.rows.insert(at, (pc, v));
        Ok(())
    }

    fn free_columns(&self) -> Vec<usize> {
        (0..self.width).filter(|c| !self.rows.iter().any(|(pc, _)| pc == c)).collect()
    }

    /// Integer point of the null space with the free coordinates set (up to a common
    /// scale) to `values`.
    fn point(&self, free: &[usize], values: &[i128]) -> Option<Vec<i128>> {
        let scale = self.rows.iter().fold(1i128, |l, (pc, row)| l.lcm(&row[*pc]));
        let mut x = vec![0i128; self.width];
        for (&c, &v) in free.iter().zip(values) {
            x[c] = v.checked_mul(scale)?;
        }
        for (pc, row) in &self.rows {
            let mut acc = 0i128;
            for &c in free {
                acc = acc.checked_add(row[c].checked_mul(x[c])?)?;
            }
            // row·x = 0 and acc is divisible by the pivot because scale is a multiple of it
            x[*pc] = -acc / row[*pc];
        }
        Some(x)
    }

    /// A point of the null space on which every functional is nonzero, normalized to have
    /// minimum 0 and coprime coordinates.
    fn generic_point(&self, avoid: &[Vec<i128>]) -> Result<Vec<i64>> {
        let free = self.free_columns();
        let accept = |x: &[i128]| -> Option<Vec<i64>> {
            for f in avoid {
                let mut dot = 0i128;
                for (a, b) in f.iter().zip(x) {
                    dot = dot.checked_add(a.checked_mul(*b)?)?;
                }
                if dot == 0 {
                    return None;
                }
            }
            let lo = *x.iter().min()?;
            let shifted: Vec<i128> = x.iter().map(|v| v - lo).collect();
            let g = shifted.iter().fold(0i128, |g, v| g.gcd(v)).max(1);
            shifted.iter().map(|v| i64::try_from(v / g).ok()).collect()
        };
        for t in 2i128..=64 {
            let values: Option<Vec<i128>> = (0..free.len() as u32).map(|i| t.checked_pow(i)).collect();
            if let Some(x) = values.and_then(|v| self.point(&free, &v)) {
                if let Some(model) = accept(&x) {
                    return Ok(model);
                }
            }
        }
        // powers overflowed or kept hitting hyperplanes: random points avoid them almost surely
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..10_000 {
            let values: Vec<i128> = free.iter().map(|_| rng.gen_range(-1_000_000i128..=1_000_000)).collect();
            if let Some(model) = self.point(&free, &values).and_then(|x| accept(&x)) {
                return Ok(model);
            }
        }
        Err(Error::Overflow("rectification model search"))
    }
}

/// Interval rectification: a unit `u` and shift `c` with `u·S + c ⊆ [0, L-1]`,
/// `L = floor((n+1)/2)`. Such a set has no wraparound in its sums and is rectifiable.
/// Returns the smallest unit, and for it the smallest shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalMap {
    pub unit: u64,
    pub shift: u64,
}

pub fn interval_rectify(s: &CyclicSet) -> Result<Option<IntervalMap>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = s.modulus();
    let width = n.div_ceil(2);
    for u in units(n) {
        let mut e = s.dilate(u).elements();
        e.sort_unstable();
        let k = e.len();
        let gaps = (0..k).map(|i| if i + 1 < k { e[i + 1] - e[i] } else { e[0] + n - e[i] });
        let max_gap = gaps.clone().max().unwrap();
        let span = n - max_gap + 1;
        if span > width {
            continue;
        }
        // windows start right after a largest gap; any shift leaving room inside [0, L) works
        let shift = gaps
            .enumerate()
            .filter(|&(_, g)| g == max_gap)
            .flat_map(|(i, _)| {
                let first = e[(i + 1) % k];
                (0..=width - span).map(move |slack| (n - first + slack) % n)
            })
            .min()
            .unwrap();
        return Ok(Some(IntervalMap { unit: u, shift }));
    }
    Ok(None)
}

/// For rectifiable `A`, every coset `g + K` meets `A` in at most `(|K|+1)/2` elements.
pub fn rect_coset_bound_verdict(a: &CyclicSet) -> Result<LemmaVerdict> {
    rect_coset_bound_verdict_bounded(a, DEFAULT_SIZE_BOUND)
}

pub fn rect_coset_bound_verdict_bounded(a: &CyclicSet, bound: usize) -> Result<LemmaVerdict> {
    if !is_rectifiable_bounded(a, bound)?.rectifiable {
        return Ok(LemmaVerdict::vacuous(LemmaId::RectCosetBound, "not rectifiable"));
    }
    let worst = subgroups(a.modulus())
        .into_iter()
        .map(|k| (k, a.max_coset_intersection(&k)))
        .max_by_key(|&(k, m)| (2 * m as i64 - k.order() as i64, k.order()))
        .unwrap();
    let (k, m) = worst;
    let ok = 2 * m as u64 <= k.order() + 1;
    let witness = Witness::subgroup(k.order()).with_set("A", a).with_count("max_coset_intersection", m);
    Ok(LemmaVerdict::checked(
        LemmaId::RectCosetBound,
        ok,
        witness,
        format!("tightest K has order {} and meets A in {m}", k.order()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::addcomb::Outcome;
    use crate::cyclic::ApCover;
    use proptest::prelude::*;

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(n, e).unwrap()
    }

    #[test]
    fn pattern_examples() {
        let p = sum_pattern(&set(5, &[0, 1, 2])).unwrap();
        assert_eq!(p.class_count(), 5);
        assert!(p.classes().contains(&vec![(0, 2), (1, 1)]));

        assert_eq!(sum_pattern(&set(7, &[0])).unwrap().class_count(), 1);

        let p = sum_pattern(&set(4, &[0, 1, 2])).unwrap();
        let classes = p.classes();
        assert_eq!(classes.len(), 4);
        assert!(classes.contains(&vec![(0, 0), (2, 2)]));
        assert!(classes.contains(&vec![(0, 2), (1, 1)]));
        assert!(classes.contains(&vec![(0, 1)]));
        assert!(classes.contains(&vec![(1, 2)]));
    }

    #[test]
    fn decider_examples() {
        let v = is_rectifiable(&set(5, &[0, 1, 2])).unwrap();
        assert!(v.rectifiable);
        assert_eq!(v.integer_model, Some(vec![0, 1, 2]));

        let v = is_rectifiable(&set(4, &[0, 1, 2])).unwrap();
        assert!(!v.rectifiable);
        assert!(v.obstruction.is_some());

        let v = is_rectifiable(&set(2, &[0, 1])).unwrap();
        assert!(!v.rectifiable);
        assert_eq!(v.obstruction, Some(Obstruction { left: (0, 0), right: (0, 1) }));

        assert!(is_rectifiable(&CyclicSet::full(13)).is_err());
        assert!(is_rectifiable_bounded(&CyclicSet::full(13), 13).is_ok());
    }

    #[test]
    fn wrapped_model() {
        // {0, 1, 11} in Z_12 is the interval {-1, 0, 1}
        let v = is_rectifiable(&set(12, &[0, 1, 11])).unwrap();
        let model = v.integer_model.unwrap();
        assert!(model == [1, 2, 0] || model == [1, 0, 2], "{model:?}");
        // Sidon-like sets get generic models
        let v = is_rectifiable(&set(101, &[0, 1, 3, 7, 12])).unwrap();
        let model = v.integer_model.unwrap();
        assert_eq!(integer_sum_pattern(&model), sum_pattern(&set(101, &[0, 1, 3, 7, 12])).unwrap());
    }

    #[test]
    fn interval_examples() {
        assert_eq!(interval_rectify(&set(5, &[0, 1, 2])).unwrap(), Some(IntervalMap { unit: 1, shift: 0 }));
        assert_eq!(interval_rectify(&set(4, &[0, 1, 2])).unwrap(), None);
        assert_eq!(interval_rectify(&set(25, &[0, 5, 10])).unwrap(), Some(IntervalMap { unit: 1, shift: 0 }));
        // {0, 4, 8} in Z_13: dilating by 10 gives {0, 1, 2}
        let m = interval_rectify(&set(13, &[0, 4, 8])).unwrap().unwrap();
        let image = set(13, &[0, 4, 8]).dilate(m.unit).translate(m.shift);
        assert!(image.iter().all(|x| x < 7));
    }

    #[test]
    fn coset_bound_examples() {
        assert_eq!(rect_coset_bound_verdict(&set(7, &[0, 1, 2])).unwrap().outcome(), Outcome::Pass);
        assert_eq!(rect_coset_bound_verdict(&set(6, &[0, 1])).unwrap().outcome(), Outcome::Pass);
        let v = rect_coset_bound_verdict(&set(9, &[0, 1, 2, 3])).unwrap();
        assert_eq!(v.outcome(), Outcome::Pass);
        assert_eq!(v.witness.unwrap().count("max_coset_intersection"), Some(2));
        assert_eq!(rect_coset_bound_verdict(&set(4, &[0, 1, 2])).unwrap().outcome(), Outcome::Vacuous);
    }

    fn brute_force_rectifiable(s: &CyclicSet, range: i64) -> bool {
        // search integer models with values in [0, range); exhaustive for tiny sets
        let target = sum_pattern(s).unwrap();
        let k = s.len();
        let mut x = vec![0i64; k];
        fn go(i: usize, x: &mut Vec<i64>, range: i64, target: &SumPattern) -> bool {
            if i == x.len() {
                return integer_sum_pattern(x) == *target;
            }
            (0..range).any(|v| {
                x[i] = v;
                go(i + 1, x, range, target)
            })
        }
        go(0, &mut x, range, &target)
    }

    #[test]
    fn agrees_with_bounded_model_search() {
        // every rectifiable set of size <= 3 has a model inside [0, 8)
        for n in 2..=9u64 {
            for mask in 1u64..(1 << n) {
                if mask.count_ones() > 3 {
                    continue;
                }
                let s = CyclicSet::from_mask(n, mask);
                assert_eq!(is_rectifiable(&s).unwrap().rectifiable, brute_force_rectifiable(&s, 8), "{s}");
            }
        }
    }

    #[test]
    fn primitive_progressions_are_rectifiable() {
        for n in 2..=20u64 {
            for d in units(n) {
                for len in 1..=n.div_ceil(2) {
                    let p = ApCover { modulus: n, start: 3 % n, diff: d, length: len }.to_set();
                    let v = is_rectifiable(&p).unwrap();
                    assert!(v.rectifiable, "{p}");
                    assert!(interval_rectify(&p).unwrap().is_some());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn invariant_under_affine_maps(n in 3u64..40, raw in prop::collection::vec(0u64..1000, 1..7), g in 0u64..1000, ui in 0usize..100) {
            let s = CyclicSet::from_residues(n, raw);
            let us = units(n);
            let u = us[ui % us.len()];
            let t = s.dilate(u).translate(g % n);
            let a = is_rectifiable(&s).unwrap();
            let b = is_rectifiable(&t).unwrap();
            prop_assert_eq!(a.rectifiable, b.rectifiable);
            if let Some(m) = &a.integer_model {
                prop_assert_eq!(integer_sum_pattern(m), sum_pattern(&s).unwrap());
            }
        }

        #[test]
        fn interval_implies_exact(n in 2u64..30, raw in prop::collection::vec(0u64..1000, 1..6)) {
            let s = CyclicSet::from_residues(n, raw);
            if interval_rectify(&s).unwrap().is_some() {
                prop_assert!(is_rectifiable(&s).unwrap().rectifiable);
            }
        }
    }
}
