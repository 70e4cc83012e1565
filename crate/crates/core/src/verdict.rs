//! Hypothesis checklists and the sufficient criteria a verdict can cite.

use serde::Serialize;

/// A sufficient condition for non-positive immersions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Criterion {
    /// Weak concatenability with respect to a surjection onto ℤ.
    WeakConcatenabilityZ,
    /// Weak concatenability with respect to a surjection onto a locally
    /// indicable (left-ordered) group.
    WeakConcatenabilityOrdered,
    /// Adian presentation with equal-length sides and an acyclic I or T graph.
    AdianForest,
    /// Reduced labelled oriented forest with an acyclic I or T graph.
    LofForest,
}

impl Criterion {
    /// Citation label printed next to verdicts.
    pub fn label(self) -> &'static str {
        match self {
            Criterion::WeakConcatenabilityZ => "Thm 3.4",
            Criterion::WeakConcatenabilityOrdered => "Thm 3.6",
            Criterion::AdianForest => "Thm 4.1",
            Criterion::LofForest => "Cor 4.3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisStatus {
    Pass,
    Fail,
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
    pub citation: String,
    pub detail: String,
}

impl Hypothesis {
    pub fn new(name: &str, status: HypothesisStatus, citation: &str, detail: impl Into<String>) -> Self {
        Hypothesis { name: name.into(), status, citation: citation.into(), detail: detail.into() }
    }

    pub fn check(name: &str, ok: bool, citation: &str, detail: impl Into<String>) -> Self {
        let status = if ok { HypothesisStatus::Pass } else { HypothesisStatus::Fail };
        Hypothesis::new(name, status, citation, detail)
    }
}

/// First failed hypothesis, if any.
pub fn first_failure(hypotheses: &[Hypothesis]) -> Option<&Hypothesis> {
    hypotheses.iter().find(|h| h.status == HypothesisStatus::Fail)
}

/// Outcome of a sufficient-condition check. `NotDecided` is not a
/// refutation: the criterion simply does not apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NpiCertified(Criterion),
    NotDecided,
    HypothesisFailure(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::NpiCertified(_))
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::NpiCertified(c) => write!(f, "NPI-certified({})", c.label()),
            Verdict::NotDecided => write!(f, "NotDecided"),
            Verdict::HypothesisFailure(reason) => write!(f, "HypothesisFailure({reason})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
