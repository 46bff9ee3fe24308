//! Structure of small-doubling sets in finite cyclic groups.
//!
//! The crate is organized bottom-up:
//!
//! * [`cyclic`]: sets, subgroups, quotients and progressions in `Z_n`;
//! * [`addcomb`]: exact checkers for classical sumset lemmas (Kneser, Kemperman, Olson, ...);
//! * [`rectify`]: exact decision of Freiman rectifiability;
//! * [`fourier`]: character sums, additive energy and the bias detector;
//! * [`classify`]: the trichotomy witness search;
//! * [`harness`]: canonical enumeration, sweeps and lemma suites.

pub mod addcomb;
pub mod classify;
pub mod cyclic;
pub mod error;
pub mod fourier;
pub mod harness;
pub mod rectify;

pub use cyclic::{ApCover, CyclicSet, Subgroup};
pub use error::{Error, Result};
