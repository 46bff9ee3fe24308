//! Concentration of unit vectors in an open half-circle.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-9;
const ANGLE_SLACK: f64 = 1e-12;

/// An open arc of measure `π`, given by its center angle, and the indices of the
/// points strictly inside it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcResult {
    pub center: f64,
    pub members: Vec<usize>,
    /// `|Σz| / |Z|`.
    pub eta: f64,
    /// `(1 + η)|Z| / 2`.
    pub bound: f64,
}

impl ArcResult {
    pub fn meets_bound(&self) -> bool {
        self.members.len() as f64 >= self.bound - 1e-9
    }
}

fn angle(z: Complex64) -> f64 {
    z.arg().rem_euclid(TAU)
}

/// Signed distance from `a` to `b` on the circle, in `(-π, π]`.
fn circular_offset(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Finds an open half-circle containing as many of the points as possible.
///
/// Points are swept in angular order; for each starting point the window covers every
/// point less than `π` ahead of it. The arc is then centred between the first and last
/// point of the best window, so all of them lie strictly inside.
pub fn arc_concentrate(points: &[Complex64]) -> Result<ArcResult> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some((index, z)) = points.iter().enumerate().find(|(_, z)| (z.norm() - 1.0).abs() > UNIT_TOLERANCE) {
        return Err(Error::NotUnitModulus { index, modulus: z.norm() });
    }
    let k = points.len();
    let mut order: Vec<(f64, usize)> = points.iter().enumerate().map(|(i, &z)| (angle(z), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let unrolled = |j: usize| if j < k { order[j].0 } else { order[j - k].0 + TAU };

    let (mut best_start, mut best_len) = (0, 0);
    let mut end = 0;
    for start in 0..k {
        end = end.max(start);
        while end < start + k && unrolled(end) - unrolled(start) < PI - ANGLE_SLACK {
            end += 1;
        }
        if end - start > best_len {
            best_len = end - start;
            best_start = start;
        }
    }
    let first = unrolled(best_start);
    let last = unrolled(best_start + best_len - 1);
    let center = ((first + last) / 2.0).rem_euclid(TAU);

    let mut members: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, &z)| circular_offset(center, angle(z)).abs() < FRAC_PI_2)
        .map(|(i, _)| i)
        .collect();
    members.sort_unstable();

    let sum: Complex64 = points.iter().sum();
    let eta = (sum.norm() / k as f64).min(1.0);
    Ok(ArcResult { center, members, eta, bound: (1.0 + eta) * k as f64 / 2.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn at(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    #[test]
    fn examples() {
        let r = arc_concentrate(&[Complex64::new(1.0, 0.0); 4]).unwrap();
        assert_eq!(r.members, vec![0, 1, 2, 3]);
        assert!((r.eta - 1.0).abs() < 1e-12 && r.center.abs() < 1e-12);

        let z = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
        let r = arc_concentrate(&z).unwrap();
        assert!((r.eta - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.members.len(), 2);
        assert!(r.meets_bound());

        let r = arc_concentrate(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]).unwrap();
        assert_eq!(r.members.len(), 1);
        assert!(r.meets_bound());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(arc_concentrate(&[]).unwrap_err(), Error::EmptySet);
        assert!(matches!(
            arc_concentrate(&[at(0.3), Complex64::new(2.0, 0.0)]),
            Err(Error::NotUnitModulus { index: 1, .. })
        ));
    }

    #[test]
    fn wraps_around_zero() {
        let r = arc_concentrate(&[at(-0.2), at(0.1)]).unwrap();
        assert_eq!(r.members, vec![0, 1]);
        assert!((circular_offset(0.0, r.center) + 0.05).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn bound_always_met(angles in prop::collection::vec(0.0f64..TAU, 1..40), repeat in 0usize..3) {
            let mut pts: Vec<Complex64> = angles.iter().map(|&t| at(t)).collect();
            // repeated points exercise the multiset case
            let extra: Vec<Complex64> = pts.iter().take(repeat).copied().collect();
            pts.extend(extra);
            let r = arc_concentrate(&pts).unwrap();
            prop_assert!(r.meets_bound(), "{} < {}", r.members.len(), r.bound);
            for &i in &r.members {
                prop_assert!(circular_offset(r.center, angle(pts[i])).abs() < FRAC_PI_2);
            }
        }
    }
}
