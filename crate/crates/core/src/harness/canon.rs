//! Canonical representatives of subsets of `Z_n` under the affine maps `x ↦ u·x + g`.

use serde::Serialize;

use crate::cyclic::{units, CyclicSet};
use crate::error::{Error, Result};

/// Largest modulus for canonical forms (sets are encoded as 64-bit masks).
pub const CANONICAL_LIMIT: u64 = 64;
/// Largest modulus for exhaustive enumeration (one visited bit per subset).
pub const ENUMERATION_LIMIT: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalClass {
    pub modulus: u64,
    /// The orbit member with the smallest mask `Σ 2^x`.
    pub representative: CyclicSet,
    pub orbit_size: u64,
}

fn rotate(w: u64, k: u64, n: u64) -> u64 {
    let full = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    if k == 0 {
        w
    } else {
        ((w << k) | (w >> (n - k))) & full
    }
}

/// Masks of every image `u·A + g`, possibly with repeats.
fn orbit_masks(a: &CyclicSet, unit_list: &[u64]) -> Vec<u64> {
    let n = a.modulus();
    let mut out = Vec::with_capacity(unit_list.len() * n as usize);
    for &u in unit_list {
        let d = a.dilate(u).mask().expect("modulus within the mask limit");
        out.extend((0..n).map(|g| rotate(d, g, n)));
    }
    out
}

fn class_of(a: &CyclicSet, unit_list: &[u64]) -> CanonicalClass {
    let mut masks = orbit_masks(a, unit_list);
    masks.sort_unstable();
    masks.dedup();
    CanonicalClass {
        modulus: a.modulus(),
        representative: CyclicSet::from_mask(a.modulus(), masks[0]),
        orbit_size: masks.len() as u64,
    }
}

pub fn canonical_form(a: &CyclicSet) -> Result<CanonicalClass> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.modulus() > CANONICAL_LIMIT {
        return Err(Error::ModulusOverBound { modulus: a.modulus(), bound: CANONICAL_LIMIT });
    }
    Ok(class_of(a, &units(a.modulus())))
}

/// One class per affine orbit of subsets with `size_min <= |A| <= size_max`, ordered by
/// the mask of the representative.
///
/// Masks are visited in increasing order; the first unvisited mask of an orbit is its
/// minimum, and the whole orbit is marked on emission.
pub fn enumerate_canonical(n: u64, size_min: usize, size_max: usize) -> Result<Vec<CanonicalClass>> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::ModulusOverBound { modulus: n, bound: ENUMERATION_LIMIT });
    }
    let unit_list = units(n);
    let total = 1u64 << n;
    let mut visited = vec![0u64; (total as usize).div_ceil(64)];
    let mut classes = Vec::new();
    let size_min = size_min.max(1);
    // every orbit contains a set holding 0, so only odd masks can be minimal
    for mask in (1..total).step_by(2) {
        let size = mask.count_ones() as usize;
        if size < size_min || size > size_max || visited[(mask / 64) as usize] >> (mask % 64) & 1 == 1 {
            continue;
        }
        let mut images = orbit_masks(&CyclicSet::from_mask(n, mask), &unit_list);
        images.sort_unstable();
        images.dedup();
        for &m in &images {
            visited[(m / 64) as usize] |= 1 << (m % 64);
        }
        classes.push(CanonicalClass {
            modulus: n,
            representative: CyclicSet::from_mask(n, mask),
            orbit_size: images.len() as u64,
        });
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Integer;

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(n, e).unwrap()
    }

    /// Number of `k`-subsets fixed by a permutation with the given cycle lengths.
    fn fixed_subsets(cycles: &[u64], k: usize) -> u64 {
        let mut ways = vec![0u64; k + 1];
        ways[0] = 1;
        for &c in cycles {
            for j in (c as usize..=k).rev() {
                ways[j] += ways[j - c as usize];
            }
        }
        ways[k]
    }

    /// Burnside count of affine orbits on `k`-subsets of `Z_n`.
    fn burnside(n: u64, k: usize) -> u64 {
        let group: Vec<(u64, u64)> = (1..=n.max(1))
            .map(|u| u % n)
            .filter(|u| u.gcd(&n) == 1)
            .flat_map(|u| (0..n).map(move |g| (u, g)))
            .collect();
        let mut total = 0;
        for &(u, g) in &group {
            let mut seen = vec![false; n as usize];
            let mut cycles = Vec::new();
            for x in 0..n {
                let mut len = 0;
                let mut y = x;
                while !seen[y as usize] {
                    seen[y as usize] = true;
                    y = (u * y + g) % n;
                    len += 1;
                }
                if len > 0 {
                    cycles.push(len);
                }
            }
            total += fixed_subsets(&cycles, k);
        }
        total / group.len() as u64
    }

    #[test]
    fn small_class_lists() {
        let reps: Vec<String> =
            enumerate_canonical(4, 1, 4).unwrap().iter().map(|c| c.representative.to_string()).collect();
        assert_eq!(reps, ["4:0", "4:0,1", "4:0,2", "4:0,1,2", "4:0,1,2,3"]);
        let reps: Vec<String> =
            enumerate_canonical(2, 1, 2).unwrap().iter().map(|c| c.representative.to_string()).collect();
        assert_eq!(reps, ["2:0", "2:0,1"]);
    }

    #[test]
    fn class_counts_match_burnside() {
        for n in 1..=12u64 {
            for k in 1..=n as usize {
                let classes = enumerate_canonical(n, k, k).unwrap();
                assert_eq!(classes.len() as u64, burnside(n, k), "n={n} k={k}");
                let binom = (0..k as u64).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
                assert_eq!(classes.iter().map(|c| c.orbit_size).sum::<u64>(), binom, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn canonical_form_examples() {
        let a = canonical_form(&set(12, &[7, 8, 0])).unwrap();
        let b = canonical_form(&set(12, &[0, 1, 5])).unwrap();
        assert_eq!(a, b);
        assert_eq!(canonical_form(&set(9, &[0])).unwrap().representative, set(9, &[0]));
        let s = set(13, &[2, 3, 7, 11]);
        let c = canonical_form(&s).unwrap();
        for u in units(13) {
            assert_eq!(canonical_form(&s.dilate(u)).unwrap(), c);
        }
        assert_eq!(canonical_form(&c.representative).unwrap(), c);
        assert!(canonical_form(&CyclicSet::empty(5)).is_err());
        assert!(canonical_form(&set(65, &[0])).is_err());
    }

    #[test]
    fn enumeration_agrees_with_canonical_form() {
        for c in enumerate_canonical(10, 1, 10).unwrap() {
            assert_eq!(canonical_form(&c.representative).unwrap(), c);
        }
    }
}
