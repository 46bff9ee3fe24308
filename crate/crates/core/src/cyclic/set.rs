//! Finite subsets of `Z_n`.
//!
//! A [`CyclicSet`] stores its elements in one of three layouts chosen purely
//! by the modulus: a single machine word for `n <= 64`, a bit vector for
//! `n <= DENSE_LIMIT`, and a sorted element list above that. The layout never
//! leaks through the public interface; two sets with the same modulus always
//! share a layout, so structural equality is set equality.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus stored as a bit vector.
pub const DENSE_LIMIT: u64 = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Word(u64),
    Bits(Box<[u64]>),
    Sparse(Box<[u64]>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclicSet {
    modulus: u64,
    repr: Repr,
}

#[inline]
pub(crate) fn word_mask(n: u64) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn rotate_word(w: u64, k: u64, n: u64) -> u64 {
    if k == 0 {
        w
    } else {
        ((w << k) | (w >> (n - k))) & word_mask(n)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    add_mod(a, n - b % n, n)
}

fn word_count(n: u64) -> usize {
    n.div_ceil(64) as usize
}

// out |= rotate_left(src, k) on an n-bit vector; bits of src at or above n are zero.
fn or_rotated(out: &mut [u64], src: &[u64], k: u64, n: u64) {
    let w = src.len();
    let (q, r) = ((k / 64) as usize, (k % 64) as u32);
    for i in (q..w).rev() {
        let j = i - q;
        let mut v = src[j] << r;
        if r > 0 && j >= 1 {
            v |= src[j - 1] >> (64 - r);
        }
        out[i] |= v;
    }
    let tail = n % 64;
    if tail != 0 {
        out[w - 1] &= (1u64 << tail) - 1;
    }
    if k == 0 {
        return;
    }
    let back = n - k;
    let (q, r) = ((back / 64) as usize, (back % 64) as u32);
    for (i, slot) in out.iter_mut().enumerate().take(w.saturating_sub(q)) {
        let j = i + q;
        let mut v = src[j] >> r;
        if r > 0 && j + 1 < w {
            v |= src[j + 1] << (64 - r);
        }
        *slot |= v;
    }
}

impl CyclicSet {
    fn from_bits(modulus: u64, words: Vec<u64>) -> Self {
        let repr = if modulus <= 64 {
            Repr::Word(words.first().copied().unwrap_or(0) & word_mask(modulus))
        } else {
            Repr::Bits(words.into_boxed_slice())
        };
        CyclicSet { modulus, repr }
    }

    /// Builds a set from residues already reduced modulo `modulus`; duplicates merge.
    fn from_reduced<I: IntoIterator<Item = u64>>(modulus: u64, elems: I) -> Self {
        if modulus <= DENSE_LIMIT {
            let mut words = vec![0u64; word_count(modulus)];
            for e in elems {
                words[(e / 64) as usize] |= 1u64 << (e % 64);
            }
            Self::from_bits(modulus, words)
        } else {
            let mut v: Vec<u64> = elems.into_iter().collect();
            v.sort_unstable();
            v.dedup();
            CyclicSet { modulus, repr: Repr::Sparse(v.into_boxed_slice()) }
        }
    }

    /// Strict constructor: rejects a zero modulus, out-of-range and repeated elements.
    pub fn new(modulus: u64, elements: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Duplicate(w[0]));
            }
        }
        if let Some(&e) = sorted.last() {
            if e >= modulus {
                return Err(Error::OutOfRange { element: e, modulus });
            }
        }
        Ok(Self::from_reduced(modulus, sorted))
    }

    /// Reduces every value modulo `modulus` and merges duplicates.
    ///
    /// Panics if `modulus` is zero.
    pub fn from_residues<I: IntoIterator<Item = u64>>(modulus: u64, values: I) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self::from_reduced(modulus, values.into_iter().map(|v| v % modulus))
    }

    /// Panics if `modulus` is zero.
    pub fn empty(modulus: u64) -> Self {
        Self::from_residues(modulus, std::iter::empty())
    }

    /// The whole group `Z_n`. Panics if `modulus` is zero.
    pub fn full(modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        if modulus <= DENSE_LIMIT {
            let mut words = vec![u64::MAX; word_count(modulus)];
            let tail = modulus % 64;
            if tail != 0 {
                *words.last_mut().unwrap() = (1u64 << tail) - 1;
            }
            Self::from_bits(modulus, words)
        } else {
            Self::from_reduced(modulus, 0..modulus)
        }
    }

    /// Bit `i` of `mask` is element `i`. Requires `1 <= modulus <= 64`.
    pub fn from_mask(modulus: u64, mask: u64) -> Self {
        assert!((1..=64).contains(&modulus), "from_mask needs 1 <= n <= 64");
        CyclicSet { modulus, repr: Repr::Word(mask & word_mask(modulus)) }
    }

    /// The set as a bit mask, available when `n <= 64`.
    pub fn mask(&self) -> Option<u64> {
        match self.repr {
            Repr::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Word(w) => w.count_ones() as usize,
            Repr::Bits(b) => b.iter().map(|w| w.count_ones() as usize).sum(),
            Repr::Sparse(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            Repr::Word(w) => *w == 0,
            Repr::Bits(b) => b.iter().all(|&w| w == 0),
            Repr::Sparse(v) => v.is_empty(),
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        if x >= self.modulus {
            return false;
        }
        match &self.repr {
            Repr::Word(w) => (w >> x) & 1 == 1,
            Repr::Bits(b) => (b[(x / 64) as usize] >> (x % 64)) & 1 == 1,
            Repr::Sparse(v) => v.binary_search(&x).is_ok(),
        }
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        match &self.repr {
            Repr::Word(w) => Iter::Words { words: std::slice::from_ref(w), idx: 0, cur: *w },
            Repr::Bits(b) => Iter::Words { words: b, idx: 0, cur: b.first().copied().unwrap_or(0) },
            Repr::Sparse(v) => Iter::Sparse(v.iter()),
        }
    }

    pub fn elements(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<u64> {
        self.iter().next()
    }

    pub(crate) fn check_same(&self, other: &CyclicSet) -> Result<()> {
        if self.modulus != other.modulus {
            Err(Error::ModulusMismatch { left: self.modulus, right: other.modulus })
        } else {
            Ok(())
        }
    }

    fn words(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Word(w) => Some(std::slice::from_ref(w)),
            Repr::Bits(b) => Some(b),
            Repr::Sparse(_) => None,
        }
    }

    /// Minkowski sum `A + B`.
    pub fn sumset(&self, other: &CyclicSet) -> Result<CyclicSet> {
        self.check_same(other)?;
        Ok(self.sumset_unchecked(other))
    }

    pub(crate) fn sumset_unchecked(&self, other: &CyclicSet) -> CyclicSet {
        let n = self.modulus;
        // iterate over the smaller operand
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        match (&small.repr, &big.repr) {
            (Repr::Word(_), Repr::Word(b)) => {
                let mut acc = 0u64;
                for a in small.iter() {
                    acc |= rotate_word(*b, a, n);
                }
                CyclicSet { modulus: n, repr: Repr::Word(acc) }
            }
            (Repr::Bits(_), Repr::Bits(b)) => {
                let mut acc = vec![0u64; b.len()];
                for a in small.iter() {
                    or_rotated(&mut acc, b, a, n);
                }
                Self::from_bits(n, acc)
            }
            _ => {
                let mut sums = Vec::with_capacity(small.len() * big.len());
                for a in small.iter() {
                    for b in big.iter() {
                        sums.push(add_mod(a, b, n));
                    }
                }
                Self::from_reduced(n, sums)
            }
        }
    }

    /// `2A`.
    pub fn doubled(&self) -> CyclicSet {
        self.sumset_unchecked(self)
    }

    /// `A - B = {a - b}`.
    pub fn difference_set(&self, other: &CyclicSet) -> Result<CyclicSet> {
        self.check_same(other)?;
        Ok(self.sumset_unchecked(&other.negate()))
    }

    /// `-A`.
    pub fn negate(&self) -> CyclicSet {
        let n = self.modulus;
        Self::from_reduced(n, self.iter().map(|a| (n - a) % n))
    }

    /// `A + g`.
    pub fn translate(&self, g: u64) -> CyclicSet {
        let n = self.modulus;
        let g = g % n;
        match &self.repr {
            Repr::Word(w) => CyclicSet { modulus: n, repr: Repr::Word(rotate_word(*w, g, n)) },
            Repr::Bits(b) => {
                let mut out = vec![0u64; b.len()];
                or_rotated(&mut out, b, g, n);
                Self::from_bits(n, out)
            }
            Repr::Sparse(v) => Self::from_reduced(n, v.iter().map(|&a| add_mod(a, g, n))),
        }
    }

    /// `u * A`. Cardinality is preserved exactly when `gcd(u, n) = 1`.
    pub fn dilate(&self, u: u64) -> CyclicSet {
        let n = self.modulus;
        Self::from_reduced(n, self.iter().map(|a| mul_mod(a, u, n)))
    }

    fn zip_words(&self, other: &CyclicSet, f: impl Fn(u64, u64) -> u64) -> Option<CyclicSet> {
        let (a, b) = (self.words()?, other.words()?);
        let words = a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect();
        Some(Self::from_bits(self.modulus, words))
    }

    pub fn intersection(&self, other: &CyclicSet) -> Result<CyclicSet> {
        self.check_same(other)?;
        Ok(self
            .zip_words(other, |x, y| x & y)
            .unwrap_or_else(|| Self::from_reduced(self.modulus, self.iter().filter(|&x| other.contains(x)))))
    }

    pub fn union(&self, other: &CyclicSet) -> Result<CyclicSet> {
        self.check_same(other)?;
        Ok(self
            .zip_words(other, |x, y| x | y)
            .unwrap_or_else(|| Self::from_reduced(self.modulus, self.iter().chain(other.iter()))))
    }

    /// `A \ B`.
    pub fn without(&self, other: &CyclicSet) -> Result<CyclicSet> {
        self.check_same(other)?;
        Ok(self
            .zip_words(other, |x, y| x & !y)
            .unwrap_or_else(|| Self::from_reduced(self.modulus, self.iter().filter(|&x| !other.contains(x)))))
    }

    pub fn is_subset(&self, other: &CyclicSet) -> Result<bool> {
        self.check_same(other)?;
        Ok(match (self.words(), other.words()) {
            (Some(a), Some(b)) => a.iter().zip(b).all(|(&x, &y)| x & !y == 0),
            _ => self.iter().all(|x| other.contains(x)),
        })
    }

    /// Number of `x` in `self`; convenience for `|A ∩ B|` without allocation.
    pub fn intersection_len(&self, other: &CyclicSet) -> Result<usize> {
        self.check_same(other)?;
        Ok(match (self.words(), other.words()) {
            (Some(a), Some(b)) => a.iter().zip(b).map(|(&x, &y)| (x & y).count_ones() as usize).sum(),
            _ => self.iter().filter(|&x| other.contains(x)).count(),
        })
    }
}

pub enum Iter<'a> {
    Words { words: &'a [u64], idx: usize, cur: u64 },
    Sparse(std::slice::Iter<'a, u64>),
}

impl Iterator for Iter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match self {
            Iter::Words { words, idx, cur } => loop {
                if *cur != 0 {
                    let bit = cur.trailing_zeros() as u64;
                    *cur &= *cur - 1;
                    return Some(*idx as u64 * 64 + bit);
                }
                *idx += 1;
                if *idx >= words.len() {
                    return None;
                }
                *cur = words[*idx];
            },
            Iter::Sparse(it) => it.next().copied(),
        }
    }
}

impl<'a> IntoIterator for &'a CyclicSet {
    type Item = u64;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Display for CyclicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.modulus)?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicSet({self})")
    }
}

fn parse_number(s: &str, offset: usize) -> Result<u64> {
    if s.is_empty() {
        return Err(Error::Parse { position: offset, message: "expected a number".into() });
    }
    if let Some(i) = s.find(|c: char| !c.is_ascii_digit()) {
        return Err(Error::Parse {
            position: offset + i,
            message: format!("unexpected character {:?}", s[i..].chars().next().unwrap()),
        });
    }
    s.parse::<u64>().map_err(|_| Error::Parse { position: offset, message: "number too large".into() })
}

/// Parses the elements part of a literal (`e1,e2,...`) for a known modulus.
/// `offset` is the byte position of `body` within the full literal, for error reporting.
pub fn parse_elements(modulus: u64, body: &str, offset: usize) -> Result<CyclicSet> {
    if modulus == 0 {
        return Err(Error::Parse { position: 0, message: "modulus must be positive".into() });
    }
    let mut elems = Vec::new();
    if !body.is_empty() {
        let mut pos = offset;
        for tok in body.split(',') {
            let e = parse_number(tok, pos)?;
            if e >= modulus {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("element {e} is not below modulus {modulus}"),
                });
            }
            if elems.contains(&e) {
                return Err(Error::Parse { position: pos, message: format!("duplicate element {e}") });
            }
            elems.push(e);
            pos += tok.len() + 1;
        }
    }
    Ok(CyclicSet::from_reduced(modulus, elems))
}

impl FromStr for CyclicSet {
    type Err = Error;

    /// Parses the literal format `<n>:<e1>,<e2>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let colon = s.find(':').ok_or(Error::Parse { position: s.len(), message: "expected `<n>:`".into() })?;
        let modulus = parse_number(&s[..colon], 0)?;
        parse_elements(modulus, &s[colon + 1..], colon + 1)
    }
}

impl Serialize for CyclicSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CyclicSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(n, e).unwrap()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(set(5, &[0, 1]).sumset(&set(5, &[0, 1])).unwrap(), set(5, &[0, 1, 2]));
        let sub = set(12, &[0, 3, 6, 9]);
        assert_eq!(sub.doubled(), sub);
        assert_eq!(set(12, &[0, 1, 5]).doubled(), set(12, &[0, 1, 2, 5, 6, 10]));
    }

    #[test]
    fn sumset_rejects_mixed_moduli() {
        let err = set(5, &[0]).sumset(&set(6, &[0])).unwrap_err();
        assert_eq!(err, Error::ModulusMismatch { left: 5, right: 6 });
    }

    #[test]
    fn empty_sumset_is_empty() {
        assert!(CyclicSet::empty(7).sumset(&set(7, &[1, 2])).unwrap().is_empty());
    }

    #[test]
    fn translate_and_dilate() {
        assert_eq!(set(12, &[0, 1, 5]).translate(7), set(12, &[7, 8, 0]));
        assert_eq!(set(5, &[0, 1, 2]).dilate(1), set(5, &[0, 1, 2]));
        assert_eq!(set(12, &[0, 1, 5]).dilate(5), set(12, &[0, 5, 1]));
    }

    #[test]
    fn literal_roundtrip_and_errors() {
        let s: CyclicSet = "12:5,0,1".parse().unwrap();
        assert_eq!(s.to_string(), "12:0,1,5");
        assert_eq!("12:".parse::<CyclicSet>().unwrap(), CyclicSet::empty(12));
        match "12:0,1,1".parse::<CyclicSet>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        match "12:0,12".parse::<CyclicSet>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        match "12:0,x".parse::<CyclicSet>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        assert!("0:".parse::<CyclicSet>().is_err());
        assert!("0,1".parse::<CyclicSet>().is_err());
    }

    #[test]
    fn layouts_agree_on_membership() {
        for n in [7u64, 64, 65, 130, 5000] {
            let elems = [0, 1, n / 2, n - 1];
            let mut e: Vec<u64> = elems.to_vec();
            e.sort();
            e.dedup();
            let s = set(n, &e);
            assert_eq!(s.elements(), e);
            assert_eq!(s.len(), e.len());
            assert!(s.contains(n - 1) && !s.contains(2) && !s.contains(n));
        }
    }

    fn naive_sum(n: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x + y) % n)).collect();
        v.sort();
        v.dedup();
        v
    }

    proptest! {
        #[test]
        fn word_level_sumset_matches_naive(n in 1u64..300, a in proptest::collection::vec(0u64..300, 0..12), b in proptest::collection::vec(0u64..300, 0..12)) {
            let a: Vec<u64> = a.into_iter().map(|x| x % n).collect();
            let b: Vec<u64> = b.into_iter().map(|x| x % n).collect();
            let sa = CyclicSet::from_residues(n, a.iter().copied());
            let sb = CyclicSet::from_residues(n, b.iter().copied());
            prop_assert_eq!(sa.sumset(&sb).unwrap().elements(), naive_sum(n, &a, &b));
            let g = b.first().copied().unwrap_or(0);
            let shifted: Vec<u64> = { let mut v: Vec<u64> = sa.iter().map(|x| (x + g) % n).collect(); v.sort(); v };
            prop_assert_eq!(sa.translate(g).elements(), shifted);
        }

        #[test]
        fn sumset_commutes_and_associates(n in 1u64..100, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let mk = |m: u64| CyclicSet::from_residues(n, (0..n).filter(|i| (m >> (i % 64)) & 1 == 1));
            let (a, b, c) = (mk(a), mk(b), mk(c));
            prop_assert_eq!(a.sumset(&b).unwrap(), b.sumset(&a).unwrap());
            prop_assert_eq!(a.sumset(&b).unwrap().sumset(&c).unwrap(), a.sumset(&b.sumset(&c).unwrap()).unwrap());
            if !a.is_empty() && !b.is_empty() {
                prop_assert!(a.sumset(&b).unwrap().len() >= a.len().max(b.len()));
            }
        }
    }
}
