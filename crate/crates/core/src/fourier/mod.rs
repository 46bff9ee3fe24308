//! Character sums over `Z_n`: the transform of an indicator, additive energy,
//! shared differences, arc concentration, the divisor sum `Φ(n)` and the bias detector.

mod arc;
mod bias;
mod phi;

use std::f64::consts::TAU;

use num::complex::Complex64;
use num::Integer;
use serde::Serialize;

pub use arc::{arc_concentrate, ArcResult};
pub use bias::{bias_detect, BiasParams, BiasWitness};
pub use phi::{phi36, phi36_sum, phi_scan, totient, PhiRow, PhiScanReport, DEFAULT_EPS};

use crate::addcomb::{representation_counts, LemmaId, LemmaVerdict, Witness};
use crate::cyclic::{CyclicSet, DENSE_LIMIT};
use crate::error::{Error, Result};

/// `e(t/n) = exp(2πi t/n)` for `t = 0..n`.
fn roots_of_unity(n: u64) -> Vec<Complex64> {
    (0..n).map(|t| Complex64::from_polar(1.0, TAU * t as f64 / n as f64)).collect()
}

/// `Â(k) = Σ_{a∈A} e(ka/n)` for every `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierProfile {
    pub modulus: u64,
    pub coefficients: Vec<Complex64>,
}

impl FourierProfile {
    pub fn coefficient(&self, k: u64) -> Complex64 {
        self.coefficients[(k % self.modulus) as usize]
    }

    /// Order of the kernel of `χ_k`, i.e. `gcd(k, n)`.
    pub fn kernel_order(&self, k: u64) -> u64 {
        k.gcd(&self.modulus)
    }

    /// `(1/n) Σ |Â(k)|^2`, which equals `|A|`.
    pub fn mean_square(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.modulus as f64
    }

    /// `(1/n) Σ |Â(k)|^4`, which equals the additive energy.
    pub fn fourth_moment(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr() * c.norm_sqr()).sum::<f64>() / self.modulus as f64
    }
}

fn check_dense(n: u64) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::ModulusOverBound { modulus: n, bound: DENSE_LIMIT });
    }
    Ok(())
}

/// Direct evaluation of all `n` coefficients; `n` must not exceed [`DENSE_LIMIT`].
pub fn dft(a: &CyclicSet) -> Result<FourierProfile> {
    let n = a.modulus();
    check_dense(n)?;
    let w = roots_of_unity(n);
    let elems = a.elements();
    let coefficients = (0..n).map(|k| elems.iter().map(|&x| w[(k * x % n) as usize]).sum()).collect();
    Ok(FourierProfile { modulus: n, coefficients })
}

/// Number of quadruples `b1 + b2 = b3 + b4` in `B^4`.
pub fn energy(b: &CyclicSet) -> u64 {
    representation_counts(b, b).expect("same modulus").iter().map(|&(_, r)| (r * r) as u64).sum()
}

/// Exact energy against the Cauchy–Schwarz bound `E(B)·|2B| >= |B|^4` and against the
/// Fourier fourth moment (relative tolerance `1e-4`).
pub fn energy_verdict(b: &CyclicSet) -> Result<LemmaVerdict> {
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    let e = energy(b);
    let size = b.len() as u128;
    let doubled = b.doubled().len();
    let cauchy_schwarz = e as u128 * doubled as u128 >= size.pow(4);
    let fourier = dft(b)?.fourth_moment();
    let rel = (fourier - e as f64).abs() / e as f64;
    let witness = Witness::default().with_set("B", b).with_count("energy", e).with_count("|2B|", doubled);
    Ok(LemmaVerdict::checked(
        LemmaId::Energy,
        cauchy_schwarz && rel <= 1e-4,
        witness,
        format!("E={e} fourier={fourier:.6} rel={rel:.3e}"),
    ))
}

/// `B^(x) = B ∩ (B + x)`; its size counts representations of `x` as a difference.
pub fn shared_diff(b: &CyclicSet, x: u64) -> CyclicSet {
    b.intersection(&b.translate(x % b.modulus())).expect("same modulus")
}

/// Katz–Koester: `B^(x) + B ⊆ (2B)^(x)` for every `x`, and `Σ_x |B^(x)| = |B|^2`.
pub fn katz_koester_verdict(b: &CyclicSet) -> Result<LemmaVerdict> {
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = b.modulus();
    let doubled = b.doubled();
    let mut total = 0usize;
    let mut bad = None;
    for x in b.difference_set(b)?.iter() {
        let bx = shared_diff(b, x);
        total += bx.len();
        if bad.is_none() && !bx.sumset(b)?.is_subset(&shared_diff(&doubled, x))? {
            bad = Some(x);
        }
    }
    let ok = bad.is_none() && total == b.len() * b.len();
    let mut witness = Witness::default().with_set("B", b).with_count("sum_shared", total);
    if let Some(x) = bad {
        witness = witness.with_count("x", x as i64);
    }
    Ok(LemmaVerdict::checked(LemmaId::KatzKoester, ok, witness, format!("n={n} |B|={}", b.len())))
}
