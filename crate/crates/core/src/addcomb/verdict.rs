use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    Vsds,
    Kneser,
    Olson,
    Consolidation,
    OlsonCorollary,
    NonVsdsBound,
    CosetSumBounds,
    Mantel,
    MantelGraph,
    Freiman3n3,
    TripleClassification,
    Alpha,
    ElementaryType,
    Kemperman,
    KempLemma,
    RectCosetBound,
    Combo,
    KatzKoester,
    Energy,
    ArcConcentration,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned));
        f.write_str(s.as_deref().unwrap_or("?"))
    }
}

/// Tri-state reading of a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Vacuous,
    Pass,
    Violation,
}

/// Structured evidence attached to a verdict: named sets and named integer quantities.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup_order: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<(&'static str, CyclicSet)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<(&'static str, i64)>,
}

impl Witness {
    pub fn subgroup(order: u64) -> Self {
        Witness { subgroup_order: Some(order), ..Default::default() }
    }

    pub fn with_set(mut self, name: &'static str, s: &CyclicSet) -> Self {
        self.sets.push((name, s.clone()));
        self
    }

    pub fn with_count(mut self, name: &'static str, v: impl TryInto<i64>) -> Self {
        self.counts.push((name, v.try_into().unwrap_or(i64::MAX)));
        self
    }

    pub fn count(&self, name: &str) -> Option<i64> {
        self.counts.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

/// Outcome of checking one lemma on one concrete instance.
///
/// `conclusion_holds` is only meaningful when `hypothesis_holds`; a verdict with a
/// true hypothesis and a false conclusion is a counterexample to the lemma.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaVerdict {
    pub lemma: LemmaId,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub witness: Option<Witness>,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_verdicts: Vec<LemmaVerdict>,
}

impl LemmaVerdict {
    pub fn vacuous(lemma: LemmaId, detail: impl Into<String>) -> Self {
        LemmaVerdict {
            lemma,
            hypothesis_holds: false,
            conclusion_holds: true,
            witness: None,
            detail: detail.into(),
            sub_verdicts: Vec::new(),
        }
    }

    pub fn checked(lemma: LemmaId, conclusion_holds: bool, witness: Witness, detail: impl Into<String>) -> Self {
        LemmaVerdict {
            lemma,
            hypothesis_holds: true,
            conclusion_holds,
            witness: Some(witness),
            detail: detail.into(),
            sub_verdicts: Vec::new(),
        }
    }

    pub fn with_subs(mut self, subs: Vec<LemmaVerdict>) -> Self {
        self.sub_verdicts = subs;
        self
    }

    /// Outcome of this verdict alone, ignoring sub-verdicts.
    pub fn outcome(&self) -> Outcome {
        match (self.hypothesis_holds, self.conclusion_holds) {
            (false, _) => Outcome::Vacuous,
            (true, true) => Outcome::Pass,
            (true, false) => Outcome::Violation,
        }
    }

    /// True if this verdict or any sub-verdict is a violation.
    pub fn is_violation(&self) -> bool {
        self.outcome() == Outcome::Violation || self.sub_verdicts.iter().any(LemmaVerdict::is_violation)
    }

    /// True if the hypothesis of this verdict or of any sub-verdict held.
    pub fn any_hypothesis(&self) -> bool {
        self.hypothesis_holds || self.sub_verdicts.iter().any(LemmaVerdict::any_hypothesis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_state() {
        let v = LemmaVerdict::vacuous(LemmaId::Kneser, "");
        assert_eq!(v.outcome(), Outcome::Vacuous);
        assert!(!v.is_violation());
        let bad = LemmaVerdict::checked(LemmaId::Olson, false, Witness::default(), "");
        assert_eq!(bad.outcome(), Outcome::Violation);
        let wrapped = LemmaVerdict::vacuous(LemmaId::Consolidation, "").with_subs(vec![bad]);
        assert!(wrapped.is_violation());
        assert_eq!(LemmaId::KempLemma.to_string(), "kemp_lemma");
    }
}
