//! Subgroups, cosets and quotients of `Z_n`.
//!
//! The subgroup of order `h` is `(n/h)·Z_n`, so the coset of `x` is labelled
//! by `x mod (n/h)` and the quotient `Z_n / H` is identified with `Z_{n/h}`.

use num::Integer;
use serde::{Deserialize, Serialize};

use super::set::CyclicSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    modulus: u64,
    order: u64,
}

impl Subgroup {
    pub fn new(modulus: u64, order: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if order == 0 || !modulus.is_multiple_of(order) {
            return Err(Error::NotADivisor { order, modulus });
        }
        Ok(Subgroup { modulus, order })
    }

    pub(crate) fn of_order(modulus: u64, order: u64) -> Self {
        debug_assert!(order > 0 && modulus.is_multiple_of(order));
        Subgroup { modulus, order }
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::of_order(modulus, 1)
    }

    pub fn full(modulus: u64) -> Self {
        Self::of_order(modulus, modulus)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `[Z_n : H]`.
    pub fn index(&self) -> u64 {
        self.modulus / self.order
    }

    /// The canonical generator `n/h` (zero for the trivial subgroup).
    pub fn generator(&self) -> u64 {
        self.index() % self.modulus
    }

    pub fn is_proper(&self) -> bool {
        self.order < self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn contains(&self, x: u64) -> bool {
        x.is_multiple_of(self.index())
    }

    /// Label of the coset `x + H`, an element of `Z_{[G:H]}`.
    pub fn coset_label(&self, x: u64) -> u64 {
        x % self.index()
    }

    pub fn elements(&self) -> CyclicSet {
        let m = self.index();
        CyclicSet::from_residues(self.modulus, (0..self.order).map(|k| k * m))
    }

    fn check(&self, s: &CyclicSet) -> Result<()> {
        if s.modulus() != self.modulus {
            Err(Error::ModulusMismatch { left: s.modulus(), right: self.modulus })
        } else {
            Ok(())
        }
    }
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All subgroups of `Z_n`, ascending by order.
pub fn subgroups(n: u64) -> Vec<Subgroup> {
    divisors(n).into_iter().map(|h| Subgroup::of_order(n, h)).collect()
}

/// Order of `x` in `Z_n`.
pub fn element_order(x: u64, n: u64) -> u64 {
    n / (x % n).gcd(&n)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Units of `Z_n` in ascending order.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|u| u.gcd(&n) == 1).collect()
}

/// The image `φ_H(A)` of a set in `Z_n / H ≅ Z_{[G:H]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientImage {
    pub parent_modulus: u64,
    pub subgroup_order: u64,
    pub image: CyclicSet,
}

/// One piece of a coset decomposition: the part of a set inside a single coset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetPart {
    pub representative: u64,
    pub part: CyclicSet,
}

impl CyclicSet {
    /// The period `π(S) = {g : S + g = S}`. The empty set is stabilized by the whole group.
    pub fn stabilizer(&self) -> Subgroup {
        let n = self.modulus();
        let size = self.len() as u64;
        if size == 0 {
            return Subgroup::full(n);
        }
        let test = |h: u64| size.is_multiple_of(h) && self.translate(n / h) == *self;
        if n <= 64 {
            for h in (2..=n).rev() {
                if n.is_multiple_of(h) && test(h) {
                    return Subgroup::of_order(n, h);
                }
            }
        } else {
            for h in divisors(n).into_iter().rev() {
                if h > 1 && test(h) {
                    return Subgroup::of_order(n, h);
                }
            }
        }
        Subgroup::trivial(n)
    }

    pub fn is_periodic(&self) -> bool {
        !self.stabilizer().is_trivial()
    }

    /// `A + H`.
    pub fn plus_subgroup(&self, h: &Subgroup) -> Result<CyclicSet> {
        h.check(self)?;
        Ok(self.sumset_unchecked(&h.elements()))
    }

    pub fn quotient_image(&self, h: &Subgroup) -> Result<QuotientImage> {
        h.check(self)?;
        Ok(QuotientImage { parent_modulus: self.modulus(), subgroup_order: h.order(), image: self.project(h) })
    }

    pub(crate) fn project(&self, h: &Subgroup) -> CyclicSet {
        let m = h.index();
        CyclicSet::from_residues(m, self.iter().map(|x| x % m))
    }

    /// The smallest subgroup `H` such that the set lies in one `H`-coset
    /// (the subgroup generated by `A - A`). Trivial for sets of size at most one.
    pub fn coset_span(&self) -> Subgroup {
        let n = self.modulus();
        let mut it = self.iter();
        let g = match it.next() {
            None => 0,
            Some(first) => it.fold(0u64, |g, x| g.gcd(&(x - first))),
        };
        // <g> has order n / gcd(g, n); gcd(0, n) = n gives the trivial subgroup
        Subgroup::of_order(n, n / g.gcd(&n))
    }

    /// Lies in a coset of a proper subgroup.
    pub fn in_proper_coset(&self) -> bool {
        self.coset_span().is_proper()
    }

    /// Number of `H`-cosets the set meets.
    pub fn cosets_met(&self, h: &Subgroup) -> usize {
        self.project(h).len()
    }

    pub fn in_single_coset(&self, h: &Subgroup) -> bool {
        let m = h.index();
        let mut it = self.iter();
        match it.next() {
            None => true,
            Some(first) => it.all(|x| x % m == first % m),
        }
    }

    /// Splits the set along `H`-cosets; parts are ordered by their minimal element,
    /// which is also the reported representative.
    pub fn coset_split(&self, h: &Subgroup) -> Result<Vec<CosetPart>> {
        h.check(self)?;
        let m = h.index();
        let n = self.modulus();
        let mut groups: Vec<(u64, Vec<u64>)> = Vec::new();
        for x in self.iter() {
            match groups.iter_mut().find(|(label, _)| *label == x % m) {
                Some((_, v)) => v.push(x),
                None => groups.push((x % m, vec![x])),
            }
        }
        Ok(groups
            .into_iter()
            .map(|(_, v)| CosetPart { representative: v[0], part: CyclicSet::from_residues(n, v) })
            .collect())
    }

    /// `|A ∩ (g + H)|` maximized over cosets.
    pub fn max_coset_intersection(&self, h: &Subgroup) -> usize {
        let m = h.index() as usize;
        if m <= 4096 {
            let mut counts = vec![0usize; m];
            for x in self.iter() {
                counts[x as usize % m] += 1;
            }
            counts.into_iter().max().unwrap_or(0)
        } else {
            let mut labels: Vec<u64> = self.iter().map(|x| x % m as u64).collect();
            labels.sort_unstable();
            labels.chunk_by(|a, b| a == b).map(|c| c.len()).max().unwrap_or(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(n, e).unwrap()
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(CyclicSet::full(6).stabilizer().order(), 6);
        assert_eq!(set(5, &[0, 1]).stabilizer().order(), 1);
        let s = set(6, &[0, 1, 3, 4]).stabilizer();
        assert_eq!(s.order(), 2);
        assert_eq!(s.elements(), set(6, &[0, 3]));
        assert_eq!(CyclicSet::empty(9).stabilizer().order(), 9);
    }

    #[test]
    fn subgroup_lattice() {
        let orders = |n| subgroups(n).iter().map(|h| h.order()).collect::<Vec<_>>();
        assert_eq!(orders(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(orders(7), vec![1, 7]);
        assert_eq!(orders(1), vec![1]);
        assert!(Subgroup::new(12, 5).is_err());
        assert!(Subgroup::new(0, 1).is_err());
    }

    #[test]
    fn quotient_examples() {
        let h3 = Subgroup::new(12, 3).unwrap();
        assert_eq!(h3.elements(), set(12, &[0, 4, 8]));
        let q = set(12, &[0, 3, 6, 9]).quotient_image(&h3).unwrap();
        assert_eq!(q.image, CyclicSet::full(4));
        let a = set(12, &[0, 1, 5]);
        assert_eq!(a.quotient_image(&Subgroup::trivial(12)).unwrap().image, a);
        assert_eq!(a.quotient_image(&Subgroup::full(12)).unwrap().image, CyclicSet::full(1));
        assert!(a.quotient_image(&Subgroup::trivial(6)).is_err());
    }

    #[test]
    fn coset_split_examples() {
        let h6 = Subgroup::new(12, 6).unwrap();
        let parts = set(12, &[0, 1, 5]).coset_split(&h6).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!((parts[0].representative, parts[0].part.clone()), (0, set(12, &[0])));
        assert_eq!((parts[1].representative, parts[1].part.clone()), (1, set(12, &[1, 5])));
        let sub = set(12, &[0, 3, 6, 9]);
        assert_eq!(sub.coset_split(&Subgroup::full(12)).unwrap().len(), 1);
        assert_eq!(set(2, &[0, 1]).coset_split(&Subgroup::trivial(2)).unwrap().len(), 2);
    }

    #[test]
    fn sparse_stabilizer() {
        let n = 130_000;
        let h = Subgroup::new(n, 4).unwrap();
        let s = set(n, &[1, 7]).plus_subgroup(&h).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.stabilizer().order(), 4);
    }

    #[test]
    fn helpers() {
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(inverse_mod(5, 12), Some(5));
        assert_eq!(inverse_mod(4, 12), None);
        assert_eq!(element_order(4, 12), 3);
        assert_eq!(element_order(0, 12), 1);
        assert_eq!(units(12), vec![1, 5, 7, 11]);
    }
}
