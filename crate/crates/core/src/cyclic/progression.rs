//! Arithmetic progressions in `Z_n`: minimal covers and exact recognition.

use num::Integer;
use serde::{Deserialize, Serialize};

use super::set::{add_mod, mul_mod, sub_mod, CyclicSet};
use super::subgroup::{element_order, inverse_mod, Subgroup};
use crate::error::Result;

/// The progression `{start + i·diff : 0 <= i < length}` in `Z_modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApCover {
    pub modulus: u64,
    pub start: u64,
    pub diff: u64,
    pub length: u64,
}

impl ApCover {
    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(move |i| add_mod(self.start, mul_mod(i, self.diff, self.modulus), self.modulus))
    }

    pub fn to_set(&self) -> CyclicSet {
        CyclicSet::from_residues(self.modulus, self.terms())
    }

    /// The difference generates the ambient group.
    pub fn is_primitive(&self) -> bool {
        self.diff.gcd(&self.modulus) == 1
    }

    /// Terms are pairwise distinct.
    pub fn has_distinct_terms(&self) -> bool {
        self.length <= element_order(self.diff, self.modulus)
    }

    /// All terms lie in pairwise distinct `H`-cosets.
    pub fn in_distinct_cosets(&self, h: &Subgroup) -> bool {
        let mut labels: Vec<u64> = self.terms().map(|t| h.coset_label(t)).collect();
        labels.sort_unstable();
        labels.windows(2).all(|w| w[0] != w[1])
    }
}

/// Smallest window `[j0, j0 + len)` on a cycle of length `cycle` containing every index.
/// Returns `(len, candidate starts)`; several starts occur when the largest gap repeats.
fn min_cyclic_window(indices: &mut [u64], cycle: u64) -> (u64, Vec<u64>) {
    indices.sort_unstable();
    let k = indices.len();
    let mut best_gap = 0;
    let mut starts = Vec::new();
    for i in 0..k {
        let next = if i + 1 < k { indices[i + 1] } else { indices[0] + cycle };
        let gap = next - indices[i];
        if gap > best_gap {
            best_gap = gap;
            starts.clear();
        }
        if gap == best_gap {
            starts.push(next % cycle);
        }
    }
    (cycle - best_gap + 1, starts)
}

/// Minimal-length progression containing `s`, or containing `φ_H(s)` when `h` is given
/// (in which case the cover lives in `Z_{[G:H]}`).
///
/// Ties are broken by smallest length, then smallest difference, then smallest start.
/// A singleton is covered by the one-term progression with difference 0.
pub fn min_ap_cover(s: &CyclicSet, h: Option<&Subgroup>) -> Result<Option<ApCover>> {
    let target = match h {
        Some(h) => s.quotient_image(h)?.image,
        None => s.clone(),
    };
    Ok(min_cover_of(&target))
}

pub(crate) fn min_cover_of(s: &CyclicSet) -> Option<ApCover> {
    let m = s.modulus();
    let elems = s.elements();
    let base = *elems.first()?;
    if elems.len() == 1 {
        return Some(ApCover { modulus: m, start: base, diff: 0, length: 1 });
    }
    // gcd of all offsets from base: d qualifies iff gcd(d, m) divides it
    let offset_gcd = elems.iter().fold(0u64, |g, &e| g.gcd(&(e - base)));
    let mut best: Option<ApCover> = None;
    let mut idx = Vec::with_capacity(elems.len());
    for d in 1..m {
        let g = d.gcd(&m);
        if offset_gcd % g != 0 {
            continue;
        }
        let cycle = m / g;
        if cycle < elems.len() as u64 {
            continue;
        }
        if let Some(b) = &best {
            // a window can never be shorter than the set itself
            if b.length == elems.len() as u64 {
                break;
            }
        }
        let inv = inverse_mod((d / g) % cycle, cycle).expect("d/g is a unit mod m/g");
        idx.clear();
        idx.extend(elems.iter().map(|&e| mul_mod((e - base) / g, inv, cycle)));
        let (length, starts) = min_cyclic_window(&mut idx, cycle);
        let start = starts.into_iter().map(|j| add_mod(base, mul_mod(j, d, m), m)).min().expect("at least one gap");
        let cand = ApCover { modulus: m, start, diff: d, length };
        let better = match &best {
            None => true,
            Some(b) => (cand.length, cand.diff, cand.start) < (b.length, b.diff, b.start),
        };
        if better {
            best = Some(cand);
        }
    }
    best
}

/// A recognized progression: its difference and its terms in progression order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApShape {
    pub diff: u64,
    pub terms: Vec<u64>,
}

/// First term of `s` viewed as a progression with difference `d`, if it is one
/// with `|s|` pairwise distinct terms.
pub fn ap_start_with_diff(s: &CyclicSet, d: u64) -> Option<u64> {
    let n = s.modulus();
    let d = d % n;
    let k = s.len() as u64;
    if k == 0 || d == 0 {
        return None;
    }
    let ord = element_order(d, n);
    if k > ord {
        return None;
    }
    if k == ord {
        // must be a full coset of <d>
        return s.iter().all(|x| s.contains(add_mod(x, d, n))).then(|| s.min().unwrap());
    }
    let mut start = None;
    for x in s.iter() {
        if !s.contains(sub_mod(x, d, n)) {
            if start.is_some() {
                return None;
            }
            start = Some(x);
        }
    }
    let x0 = start?;
    (0..k).all(|i| s.contains(add_mod(x0, mul_mod(i, d, n), n))).then_some(x0)
}

/// Recognizes `s` (with `|s| >= 2`) as an arithmetic progression of `|s|` distinct terms,
/// reporting the smallest valid difference.
pub fn is_ap(s: &CyclicSet) -> Option<ApShape> {
    let n = s.modulus();
    if s.len() < 2 {
        return None;
    }
    (1..n).find_map(|d| {
        ap_start_with_diff(s, d).map(|x0| ApShape {
            diff: d,
            terms: (0..s.len() as u64).map(|i| add_mod(x0, mul_mod(i, d, n), n)).collect(),
        })
    })
}
