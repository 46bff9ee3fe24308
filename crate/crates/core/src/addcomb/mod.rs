//! Exact checkers for the classical sumset lemmas.
//!
//! Each checker evaluates a lemma's hypothesis and conclusion on concrete sets and
//! returns a [`LemmaVerdict`].

mod kemperman;
mod kneser;
mod lemmas;
mod verdict;

pub use kemperman::{
    elementary_type, elementary_verdict, kemp_lemma_verdict, kemperman_verdict, representation_counts,
    verify_elementary, ElementaryType, Side,
};
pub use kneser::{consol_verdict, is_vsds, is_vsds_set, kneser_verdict, olson_verdict};
pub use lemmas::{
    alpha_verdict, classify_triple, coset_sum_bounds, freiman_3n3_verdict, mantel_verdict, triple_verdict,
    unique_differences, TripleCase, TripleClass,
};
pub use verdict::{LemmaId, LemmaVerdict, Outcome, Witness};
