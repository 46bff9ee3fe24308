//! Detection of a large character sum and its conversion into a progression that
//! captures most of the set modulo a subgroup.

use std::f64::consts::TAU;

use num::complex::Complex64;
use num::Integer;
use serde::Serialize;

use super::{arc_concentrate, dft};
use crate::cyclic::{inverse_mod, mul_mod, ApCover, CyclicSet, Subgroup};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BiasParams {
    /// Smallest admissible index `[Z_n : H]`.
    pub min_index: u64,
    /// A character qualifies when `|Â(k)| > coeff·|A|`.
    pub coeff: f64,
    /// Required fraction of `A` inside `P + H`.
    pub coverage: f64,
}

impl Default for BiasParams {
    fn default() -> Self {
        BiasParams { min_index: 37, coeff: 0.8, coverage: 0.9 }
    }
}

impl BiasParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| x > 0.0 && x <= 1.0;
        if self.min_index == 0 || !unit(self.coeff) || !unit(self.coverage) {
            return Err(Error::InvalidParameter(format!(
                "need min_index >= 1 and coeff, coverage in (0, 1]; got {self:?}"
            )));
        }
        Ok(())
    }
}

/// A subgroup `H` of index `m` and a primitive progression `P` with `|P| <= (m+1)/2`
/// such that `P + H` contains more than the required fraction of `A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasWitness {
    pub subgroup: Subgroup,
    pub index: u64,
    /// The character `χ_k` whose coefficient triggered the search.
    pub character: u64,
    pub coefficient_ratio: f64,
    pub progression: ApCover,
    pub covered: CyclicSet,
    pub coverage: f64,
}

impl BiasWitness {
    /// Re-derives every stated property of the witness from `a`.
    pub fn is_valid_for(&self, a: &CyclicSet, params: &BiasParams) -> Result<bool> {
        let p = &self.progression;
        if p.modulus != a.modulus() || self.subgroup.modulus() != a.modulus() {
            return Err(Error::MalformedWitness("moduli disagree".into()));
        }
        let covered = p.to_set().plus_subgroup(&self.subgroup)?.intersection(a)?;
        let coverage = covered.len() as f64 / a.len() as f64;
        Ok(p.is_primitive()
            && self.index == self.subgroup.index()
            && self.index >= params.min_index
            && 2 * p.length <= self.index + 1
            && covered == self.covered
            && coverage > params.coverage)
    }
}

/// Scans characters `χ_k` in increasing `k` whose kernel has index at least `min_index`.
/// For the first `k` with a large coefficient that leads to enough coverage, the points
/// `ζ(φ_H(a))` are concentrated in a half-circle, the arc is read off as a progression in
/// `Z_n / H`, and that progression is lifted to a primitive one in `Z_n`.
///
/// A `None` answer only means no qualifying character produced a witness.
pub fn bias_detect(a: &CyclicSet, params: &BiasParams) -> Result<Option<BiasWitness>> {
    params.validate()?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.modulus();
    let profile = dft(a)?;
    let size = a.len() as f64;
    for k in 1..n {
        let g = k.gcd(&n);
        let m = n / g;
        let ratio = profile.coefficient(k).norm() / size;
        if m < params.min_index || ratio <= params.coeff {
            continue;
        }
        if let Some(w) = lift_character(a, k, ratio, params)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn lift_character(a: &CyclicSet, k: u64, ratio: f64, params: &BiasParams) -> Result<Option<BiasWitness>> {
    let n = a.modulus();
    let g = k.gcd(&n);
    let m = n / g;
    let h = Subgroup::new(n, g)?;
    let kk = (k / g) % m;
    let elems = a.elements();
    // ζ(y) = e(k'y/m) on Z_m; record j = k'y mod m for each point
    let js: Vec<u64> = elems.iter().map(|&x| mul_mod(kk, x % m, m)).collect();
    let points: Vec<Complex64> = js.iter().map(|&j| Complex64::from_polar(1.0, TAU * j as f64 / m as f64)).collect();
    let arc = arc_concentrate(&points)?;

    let mut member_js: Vec<u64> = arc.members.iter().map(|&i| js[i]).collect();
    member_js.sort_unstable();
    member_js.dedup();
    let (length, j0) = min_window(&member_js, m);
    // Q = {k'^{-1}(j0 + i)}: start k'^{-1} j0, difference k'^{-1}
    let inv = inverse_mod(kk, m).expect("k' is a unit modulo m");
    let start = mul_mod(inv, j0, m);
    let progression = ApCover { modulus: n, start, diff: lift_unit(inv, m, n), length };
    let covered = progression.to_set().plus_subgroup(&h)?.intersection(a)?;
    let coverage = covered.len() as f64 / a.len() as f64;
    let witness =
        BiasWitness { subgroup: h, index: m, character: k, coefficient_ratio: ratio, progression, covered, coverage };
    if witness.is_valid_for(a, params)? {
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

/// Smallest `d ≡ u (mod m)` generating `Z_n`, for a unit `u` of `Z_m` and `m | n`.
fn lift_unit(u: u64, m: u64, n: u64) -> u64 {
    (0..n / m).map(|t| u + t * m).find(|d| d.gcd(&n) == 1).expect("units of Z_m lift to units of Z_n")
}

/// Shortest run of consecutive residues mod `m` containing the sorted distinct values;
/// returns `(length, first residue)`, preferring the smallest first residue on ties.
fn min_window(values: &[u64], m: u64) -> (u64, u64) {
    let k = values.len();
    let mut best = (u64::MAX, 0);
    for i in 0..k {
        let next = if i + 1 < k { values[i + 1] } else { values[0] + m };
        let gap = next - values[i];
        let cand = (m - gap + 1, next % m);
        if cand < best {
            best = cand;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(n, e).unwrap()
    }

    #[test]
    fn interval_in_z100() {
        let a = CyclicSet::from_residues(100, 0..10);
        // oracle: |Â(1)| = |Σ e(j/100)| over j < 10, evaluated directly
        let direct: Complex64 = (0..10).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / 100.0)).sum();
        assert!(direct.norm() > 8.0);
        let params = BiasParams { min_index: 50, ..BiasParams::default() };
        let w = bias_detect(&a, &params).unwrap().unwrap();
        assert!(w.subgroup.is_trivial());
        assert_eq!(w.character, 1);
        assert_eq!((w.progression.start, w.progression.diff, w.progression.length), (0, 1, 10));
        assert_eq!(w.covered, a);
        assert_eq!(w.coverage, 1.0);
        assert!(w.is_valid_for(&a, &params).unwrap());
    }

    #[test]
    fn full_group_has_no_bias() {
        assert_eq!(
            bias_detect(&CyclicSet::full(60), &BiasParams { min_index: 2, ..Default::default() }).unwrap(),
            None
        );
    }

    #[test]
    fn antipodal_pair() {
        // oracle: Â(k) = 1 + (-1)^k, so odd k vanish and k = 2 is the first candidate
        let a = set(100, &[0, 50]);
        let p = dft(&a).unwrap();
        assert!(p.coefficient(1).norm() < 1e-9 && (p.coefficient(2).norm() - 2.0).abs() < 1e-9);
        let w = bias_detect(&a, &BiasParams::default()).unwrap().unwrap();
        assert_eq!((w.character, w.subgroup.order(), w.index), (2, 2, 50));
        assert_eq!((w.progression.start, w.progression.diff, w.progression.length), (0, 1, 1));
        assert_eq!(w.coverage, 1.0);
    }

    #[test]
    fn lifting_units() {
        assert_eq!(lift_unit(5, 6, 30), 11);
        assert_eq!(lift_unit(1, 10, 100), 1);
        assert_eq!(lift_unit(3, 4, 12), 7);
        assert_eq!(lift_unit(0, 1, 1), 0);
    }

    #[test]
    fn window_helper() {
        assert_eq!(min_window(&[0, 1, 2], 10), (3, 0));
        assert_eq!(min_window(&[0, 9], 10), (2, 9));
        assert_eq!(min_window(&[4], 10), (1, 4));
    }

    #[test]
    fn bad_params() {
        let a = set(10, &[0]);
        assert!(bias_detect(&a, &BiasParams { coeff: 1.5, ..Default::default() }).is_err());
        assert!(bias_detect(&a, &BiasParams { min_index: 0, ..Default::default() }).is_err());
    }
}
