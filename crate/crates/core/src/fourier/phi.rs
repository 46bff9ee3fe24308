//! The divisor sum `Φ(n) = (1/n) Σ_{d | n, d <= 36} φ(d)`.

use num::rational::Ratio;
use serde::Serialize;

/// `4/2025`.
pub const DEFAULT_EPS: (u64, u64) = (4, 2025);

const DIVISOR_CAP: u64 = 36;

/// Euler's totient by trial factorization.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `Σ_{d | n, d <= 36} φ(d)`, the numerator of `Φ(n)` over `n`.
pub fn phi36_sum(n: u64) -> u64 {
    (1..=DIVISOR_CAP.min(n)).filter(|d| n.is_multiple_of(*d)).map(totient).sum()
}

pub fn phi36(n: u64) -> Ratio<u64> {
    Ratio::new(phi36_sum(n), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhiRow {
    pub n: u64,
    pub phi_num: u64,
    pub phi_den: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiScanReport {
    /// The scan covers `lo < n <= hi`.
    pub lo: u64,
    pub hi: u64,
    pub eps_num: u64,
    pub eps_den: u64,
    pub checked: u64,
    pub violations: Vec<u64>,
    /// The row with the largest `Φ(n)`.
    pub max_row: Option<PhiRow>,
}

/// Checks `Φ(n) < eps` exactly for `lo < n <= hi`, passing every row to `on_row`.
pub fn phi_scan(lo: u64, hi: u64, eps: (u64, u64), mut on_row: impl FnMut(&PhiRow)) -> PhiScanReport {
    let (en, ed) = eps;
    let mut report =
        PhiScanReport { lo, hi, eps_num: en, eps_den: ed, checked: 0, violations: Vec::new(), max_row: None };
    let mut max_phi: Option<Ratio<u64>> = None;
    for n in lo.saturating_add(1)..=hi {
        let sum = phi36_sum(n);
        // sum / n < en / ed, cross-multiplied in u128
        let ok = (sum as u128) * (ed as u128) < (en as u128) * (n as u128);
        let phi = Ratio::new(sum, n);
        let row = PhiRow { n, phi_num: *phi.numer(), phi_den: *phi.denom(), ok };
        on_row(&row);
        report.checked += 1;
        if !ok {
            report.violations.push(n);
        }
        if max_phi.is_none_or(|m| phi > m) {
            max_phi = Some(phi);
            report.max_row = Some(row);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Integer;

    fn totient_by_gcd(d: u64) -> u64 {
        (1..=d).filter(|k| k.gcd(&d) == 1).count() as u64
    }

    #[test]
    fn totients_match_gcd_count() {
        for d in 1..=500 {
            assert_eq!(totient(d), totient_by_gcd(d), "{d}");
        }
        assert_eq!((1..=36).map(totient_by_gcd).sum::<u64>(), 396);
        assert_eq!(
            phi36_sum(36 * 35 * 11 * 4),
            (1..=36).filter(|d| (36 * 35 * 11 * 4) % d == 0).map(totient_by_gcd).sum::<u64>()
        );
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi36(101), Ratio::new(1, 101));
        assert_eq!(phi36(1), Ratio::new(1, 1));
        assert_eq!(phi36(12), Ratio::new(12, 12));
        // 72: divisors <= 36 are 1,2,3,4,6,8,9,12,18,24,36
        assert_eq!(phi36_sum(72), 1 + 1 + 2 + 2 + 2 + 4 + 6 + 4 + 6 + 8 + 12);
    }

    #[test]
    fn scan_small_range() {
        let mut rows = Vec::new();
        let r = phi_scan(40, 44, (1, 20), |row| rows.push(*row));
        assert_eq!(r.checked, 4);
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![41, 42, 43, 44]);
        // Φ(42) = 30/42 and Φ(44) = 24/44; the primes give 1/n
        assert_eq!(r.violations, vec![42, 44]);
        assert_eq!((rows[1].phi_num, rows[1].phi_den), (5, 7));
        assert_eq!(r.max_row.unwrap().n, 42);
        // below 37 every divisor counts, so Φ(n) = 1
        assert_eq!(phi36(30), Ratio::new(1, 1));
    }
}
