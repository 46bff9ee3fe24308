//! Exact arithmetic of subsets, subgroups, quotients and progressions in `Z_n`.

mod progression;
mod set;
mod subgroup;

pub(crate) use progression::min_cover_of;
pub use progression::{ap_start_with_diff, is_ap, min_ap_cover, ApCover, ApShape};
pub(crate) use set::{add_mod, mul_mod, sub_mod};
pub use set::{parse_elements, CyclicSet, Iter, DENSE_LIMIT};
pub use subgroup::{divisors, element_order, inverse_mod, subgroups, units, CosetPart, QuotientImage, Subgroup};
