//! Prefix-weight profiles, multisets of minima and maxima, and the weak
//! concatenability decision.
//!
//! For a relator `r = x_1 ⋯ x_ℓ` and a homomorphism `φ` into an ordered
//! group, `v_t = φ(x_1 ⋯ x_t)` for `t = 1..ℓ` and `v_0` is the identity.
//! With `m` the minimum of `v_1..v_ℓ`, letter `t` contributes a copy of its
//! generator (positive or negative according to its exponent) when one of its
//! endpoints `v_{t-1}`, `v_t` equals `m`. For nonnegative integer weights
//! this is the usual rule: `a⁻¹` counts when `v_t = m`, `a` when
//! `v_{t-1} = m`. The endpoint form does not depend on the sign of `φ(a)`,
//! which matters for targets such as the opposite Dehornoy order where every
//! Artin generator is negative. Maxima are the mirror image.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::orders::{verify_assignment, Assignment, OrderError, OrderedTarget};
use crate::presentation::{Presentation, Word};
use crate::verdict::{first_failure, Hypothesis, HypothesisStatus};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MinimaError {
    #[error("generator {gen} has negative weight; invert it first")]
    NegativeWeight { gen: usize },
    #[error("relator does not have trivial weight")]
    NonVanishingRelatorWeight,
    #[error("relator is empty")]
    EmptyRelator,
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConcatError {
    #[error("{0} relators exceed the subset search limit of {MAX_RELATORS}")]
    TooManyRelators(usize),
    #[error("generator index {0} exceeds the support bitset width of {MAX_GENERATORS}")]
    TooManyGenerators(usize),
}

pub const MAX_RELATORS: usize = 24;
pub const MAX_GENERATORS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Min,
    Max,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "min" => Ok(Mode::Min),
            "max" => Ok(Mode::Max),
            _ => Err(format!("unknown mode {s:?} (expected min or max)")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CopyCount {
    pub pos: u32,
    pub neg: u32,
}

impl CopyCount {
    pub fn new(pos: u32, neg: u32) -> Self {
        CopyCount { pos, neg }
    }

    pub fn total(self) -> u32 {
        self.pos + self.neg
    }

    pub fn signed(self) -> i64 {
        self.pos as i64 - self.neg as i64
    }
}

/// Extremal letters of one relator: generator → (positive, negative) copies.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimaMultiset<E> {
    pub relator: usize,
    pub extremal: E,
    pub counts: BTreeMap<usize, CopyCount>,
    pub mode: Mode,
}

impl<E> MinimaMultiset<E> {
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().filter(|(_, c)| c.total() > 0).map(|(&g, _)| g)
    }

    pub fn count(&self, gen: usize) -> CopyCount {
        self.counts.get(&gen).copied().unwrap_or_default()
    }

    pub fn total(&self) -> u32 {
        self.counts.values().map(|c| c.total()).sum()
    }
}

/// `φ` of every nonempty prefix. The last entry is the identity for a valid
/// assignment.
pub fn prefix_profile<T: OrderedTarget>(
    target: &T,
    assignment: &Assignment<T::Element>,
    r: &Word,
) -> Result<Vec<T::Element>, MinimaError> {
    if target.requires_nonnegative_images() {
        for l in r.iter() {
            let img = assignment.image(l.gen)?;
            if target.compare(img, &target.identity())?.is_lt() {
                return Err(MinimaError::NegativeWeight { gen: l.gen });
            }
        }
    }
    let mut acc = target.identity();
    let mut out = Vec::with_capacity(r.len());
    for l in r.iter() {
        let img = assignment.image(l.gen)?;
        acc = if l.inverse {
            target.multiply(&acc, &target.inverse(img))
        } else {
            target.multiply(&acc, img)
        };
        out.push(acc.clone());
    }
    Ok(out)
}

pub fn extremal_multiset<T: OrderedTarget>(
    target: &T,
    assignment: &Assignment<T::Element>,
    relator: usize,
    r: &Word,
    mode: Mode,
) -> Result<MinimaMultiset<T::Element>, MinimaError> {
    if r.is_empty() {
        return Err(MinimaError::EmptyRelator);
    }
    let profile = prefix_profile(target, assignment, r)?;
    let identity = target.identity();
    if !target.equal(profile.last().expect("nonempty"), &identity)? {
        return Err(MinimaError::NonVanishingRelatorWeight);
    }
    let mut extremal = profile[0].clone();
    for v in &profile[1..] {
        let ord = target.compare(v, &extremal)?;
        let better = match mode {
            Mode::Min => ord.is_lt(),
            Mode::Max => ord.is_gt(),
        };
        if better {
            extremal = v.clone();
        }
    }
    // at_extremum[t] refers to v_t, t = 0..=ℓ
    let at_extremum: Vec<bool> = std::iter::once(&identity)
        .chain(profile.iter())
        .map(|v| target.equal(v, &extremal))
        .collect::<Result<_, _>>()?;
    let mut counts: BTreeMap<usize, CopyCount> = BTreeMap::new();
    for (idx, l) in r.iter().enumerate() {
        let t = idx + 1;
        if at_extremum[t - 1] || at_extremum[t] {
            let c = counts.entry(l.gen).or_default();
            if l.inverse {
                c.neg += 1;
            } else {
                c.pos += 1;
            }
        }
    }
    Ok(MinimaMultiset { relator, extremal, counts, mode })
}

pub fn minima_multiset<T: OrderedTarget>(
    target: &T,
    assignment: &Assignment<T::Element>,
    relator: usize,
    r: &Word,
) -> Result<MinimaMultiset<T::Element>, MinimaError> {
    extremal_multiset(target, assignment, relator, r, Mode::Min)
}

pub fn maxima_multiset<T: OrderedTarget>(
    target: &T,
    assignment: &Assignment<T::Element>,
    relator: usize,
    r: &Word,
) -> Result<MinimaMultiset<T::Element>, MinimaError> {
    extremal_multiset(target, assignment, relator, r, Mode::Max)
}

/// One step of a concatenation ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub relator: usize,
    pub gen: usize,
    pub pos: u32,
    pub neg: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcatCertificate {
    pub ordering: Vec<usize>,
    pub witnesses: Vec<Witness>,
}

/// The maximal subsets of relators that can be placed in some valid order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcatFailure {
    pub maximal_placeable: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Concatenability {
    Concatenable(ConcatCertificate),
    NotConcatenable(ConcatFailure),
}

impl Concatenability {
    pub fn certificate(&self) -> Option<&ConcatCertificate> {
        match self {
            Concatenability::Concatenable(c) => Some(c),
            Concatenability::NotConcatenable(_) => None,
        }
    }
}

fn support_mask<E>(m: &MinimaMultiset<E>) -> Result<u128, ConcatError> {
    m.support().try_fold(0u128, |acc, g| {
        if g >= MAX_GENERATORS {
            Err(ConcatError::TooManyGenerators(g))
        } else {
            Ok(acc | (1u128 << g))
        }
    })
}

/// Lowest generator `x` in the support of `m`, outside `used`, with unequal
/// positive and negative counts.
fn fresh_witness<E>(m: &MinimaMultiset<E>, used: u128) -> Option<usize> {
    m.counts
        .iter()
        .find(|(&g, c)| c.total() > 0 && used & (1u128 << g) == 0 && c.pos != c.neg)
        .map(|(&g, _)| g)
}

/// Decides weak concatenability by dynamic programming over placed subsets.
///
/// A subset `S` is placeable when it is empty, or some `i ∈ S` has a fresh
/// witness with respect to the supports of `S ∖ {i}` and `S ∖ {i}` is
/// placeable. The certificate is built front to back, always taking the
/// lowest relator (then lowest generator) that keeps the rest completable.
pub fn weak_concatenability<E>(
    multisets: &[MinimaMultiset<E>],
) -> Result<Concatenability, ConcatError> {
    let k = multisets.len();
    if k > MAX_RELATORS {
        return Err(ConcatError::TooManyRelators(k));
    }
    let supports: Vec<u128> = multisets.iter().map(support_mask).collect::<Result<_, _>>()?;
    let states = 1usize << k;
    let mut union = vec![0u128; states];
    for s in 1..states {
        let low = s.trailing_zeros() as usize;
        union[s] = union[s & (s - 1)] | supports[low];
    }
    let can_append = |placed: usize, i: usize| fresh_witness(&multisets[i], union[placed]).is_some();

    let mut placeable = vec![false; states];
    placeable[0] = true;
    for s in 1..states {
        placeable[s] = (0..k).any(|i| s & (1 << i) != 0 && placeable[s ^ (1 << i)] && can_append(s ^ (1 << i), i));
    }
    let full = states - 1;
    if !placeable[full] {
        let mut maximal: Vec<Vec<usize>> = (0..states)
            .filter(|&s| placeable[s] && (0..k).all(|i| s & (1 << i) != 0 || !placeable[s | (1 << i)]))
            .map(|s| (0..k).filter(|&i| s & (1 << i) != 0).map(|i| multisets[i].relator).collect())
            .collect();
        maximal.sort();
        return Ok(Concatenability::NotConcatenable(ConcatFailure { maximal_placeable: maximal }));
    }

    // completable[s]: the placed set s extends to a full valid ordering
    let mut completable = vec![false; states];
    completable[full] = true;
    for s in (0..full).rev() {
        completable[s] = (0..k).any(|i| s & (1 << i) == 0 && completable[s | (1 << i)] && can_append(s, i));
    }
    debug_assert!(completable[0]);
    let mut placed = 0usize;
    let mut ordering = Vec::with_capacity(k);
    let mut witnesses = Vec::with_capacity(k);
    while placed != full {
        let i = (0..k)
            .find(|&i| placed & (1 << i) == 0 && completable[placed | (1 << i)] && can_append(placed, i))
            .expect("completable state has a successor");
        let gen = fresh_witness(&multisets[i], union[placed]).expect("checked above");
        let c = multisets[i].count(gen);
        ordering.push(multisets[i].relator);
        witnesses.push(Witness { relator: multisets[i].relator, gen, pos: c.pos, neg: c.neg });
        placed |= 1 << i;
    }
    let cert = ConcatCertificate { ordering, witnesses };
    debug_assert!(replay_certificate(&cert, multisets).is_ok());
    Ok(Concatenability::Concatenable(cert))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("ordering is not a permutation of the relators")]
    NotAPermutation,
    #[error("step {step}: witness recorded for relator {recorded}, ordering has {expected}")]
    WrongRelator { step: usize, recorded: usize, expected: usize },
    #[error("step {step}: generator {gen} is not in the multiset of relator {relator}")]
    NotInSupport { step: usize, relator: usize, gen: usize },
    #[error("step {step}: generator {gen} already occurs in an earlier multiset")]
    NotFresh { step: usize, gen: usize },
    #[error("step {step}: generator {gen} has equal positive and negative copies")]
    BalancedCopies { step: usize, gen: usize },
    #[error("step {step}: recorded counts ({pos}, {neg}) do not match the multiset")]
    CountMismatch { step: usize, pos: u32, neg: u32 },
}

/// Checks a certificate step by step against the multisets (indexed by
/// their `relator` field).
pub fn replay_certificate<E>(
    cert: &ConcatCertificate,
    multisets: &[MinimaMultiset<E>],
) -> Result<(), ReplayError> {
    let by_relator: BTreeMap<usize, &MinimaMultiset<E>> =
        multisets.iter().map(|m| (m.relator, m)).collect();
    let mut sorted = cert.ordering.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cert.ordering.len()
        || sorted != by_relator.keys().copied().collect::<Vec<_>>()
        || cert.witnesses.len() != cert.ordering.len()
    {
        return Err(ReplayError::NotAPermutation);
    }
    let mut seen: Vec<usize> = Vec::new();
    for (step, (&rel, w)) in cert.ordering.iter().zip(&cert.witnesses).enumerate() {
        if w.relator != rel {
            return Err(ReplayError::WrongRelator { step, recorded: w.relator, expected: rel });
        }
        let m = by_relator[&rel];
        let c = m.count(w.gen);
        if c.total() == 0 {
            return Err(ReplayError::NotInSupport { step, relator: rel, gen: w.gen });
        }
        if seen.contains(&w.gen) {
            return Err(ReplayError::NotFresh { step, gen: w.gen });
        }
        if c.pos == c.neg {
            return Err(ReplayError::BalancedCopies { step, gen: w.gen });
        }
        if (c.pos, c.neg) != (w.pos, w.neg) {
            return Err(ReplayError::CountMismatch { step, pos: w.pos, neg: w.neg });
        }
        seen.extend(m.support());
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConcatVerdict {
    Concatenable(ConcatCertificate),
    NotConcatenable(ConcatFailure),
    HypothesisFailure(String),
}

/// Everything `check_presentation` looked at.
#[derive(Clone, Debug)]
pub struct PresentationCheck<E> {
    pub hypotheses: Vec<Hypothesis>,
    /// Generators inverted so that integer weights are nonnegative.
    pub flips: Vec<usize>,
    /// The presentation after flips; multisets refer to it.
    pub presentation: Presentation,
    pub assignment: Assignment<E>,
    pub multisets: Vec<MinimaMultiset<E>>,
    pub verdict: ConcatVerdict,
}

pub const CITE_WIRTINGER: &str = "Thm 3.4 / Thm 3.6: H1(G) nontrivial free abelian of rank n-k";
pub const CITE_REDUCED: &str = "Thm 3.4 / Thm 3.6: cyclically reduced relators";
pub const CITE_HOM: &str = "Thm 3.4 / Thm 3.6: phi is a homomorphism";
pub const CITE_SURJ: &str = "Thm 3.4 / Thm 3.6: phi is surjective";
pub const CITE_LI: &str = "Thm 3.6: target group locally indicable";

/// Runs the hypotheses of the weak-concatenability criterion, flips
/// negative generators for integer targets, computes the multisets and
/// decides.
pub fn check_presentation<T: OrderedTarget>(
    p: &Presentation,
    target: &T,
    assignment: &Assignment<T::Element>,
    mode: Mode,
) -> Result<PresentationCheck<T::Element>, OrderError> {
    let mut hypotheses = Vec::new();
    let (reduced, changed) = p.cyclically_reduced();
    let diagnostics = reduced.validate();
    let detail = if !diagnostics.is_empty() {
        diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
    } else if changed.is_empty() {
        "all relators nonempty and cyclically reduced".to_string()
    } else {
        let list: Vec<String> = changed.iter().map(|i| format!("r{}", i + 1)).collect();
        format!("relators {} replaced by their cyclic reductions", list.join(", "))
    };
    hypotheses.push(Hypothesis::check("relators cyclically reduced", diagnostics.is_empty(), CITE_REDUCED, detail));
    let p = &reduced;
    let wirt = crate::homology::is_generalized_wirtinger(p);
    hypotheses.push(Hypothesis::check("generalized Wirtinger", wirt.holds, CITE_WIRTINGER, wirt.reason));

    let mut presentation = p.clone();
    let mut assignment = assignment.clone();
    let mut flips = Vec::new();

    let all_assigned = (0..p.num_generators()).all(|g| assignment.image(g).is_ok());
    if !all_assigned || !diagnostics.is_empty() {
        let missing = (0..p.num_generators()).find(|&g| assignment.image(g).is_err());
        hypotheses.push(Hypothesis::check(
            "phi well defined",
            false,
            CITE_HOM,
            match missing {
                Some(g) => format!("generator {} has no image", p.generators[g]),
                None => "presentation is invalid".to_string(),
            },
        ));
    } else {
        let ok = verify_assignment(target, &assignment, p)?;
        hypotheses.push(Hypothesis::check(
            "phi well defined",
            ok,
            CITE_HOM,
            if ok { "every relator maps to the identity" } else { "some relator has nontrivial image" },
        ));
        let images: Vec<T::Element> =
            (0..p.num_generators()).map(|g| assignment.image(g).cloned()).collect::<Result<_, _>>()?;
        match target.images_generate(&images) {
            Some(ok) => hypotheses.push(Hypothesis::check(
                "phi surjective",
                ok,
                CITE_SURJ,
                if ok { "generator images generate the target" } else { "images generate a proper subgroup" },
            )),
            None => hypotheses.push(Hypothesis::new(
                "phi surjective",
                HypothesisStatus::Assumed,
                CITE_SURJ,
                format!("surjectivity onto {} is asserted by the user, not checked", target.name()),
            )),
        }
        if target.requires_nonnegative_images() {
            for (g, img) in images.iter().enumerate() {
                if target.compare(img, &target.identity())?.is_lt() {
                    flips.push(g);
                }
            }
            presentation = p.flip_generators(&flips);
            for &g in &flips {
                let inv = target.inverse(assignment.image(g)?);
                assignment.images[g] = Some(inv);
            }
        }
    }
    hypotheses.push(if target.locally_indicable_known() {
        Hypothesis::new("target locally indicable", HypothesisStatus::Pass, CITE_LI, format!("{} is locally indicable", target.name()))
    } else {
        Hypothesis::new(
            "target locally indicable",
            HypothesisStatus::Assumed,
            CITE_LI,
            format!("local indicability of {} is assumed", target.name()),
        )
    });

    if let Some(h) = first_failure(&hypotheses) {
        let reason = format!("{}: {}", h.name, h.detail);
        return Ok(PresentationCheck {
            hypotheses,
            flips,
            presentation,
            assignment,
            multisets: Vec::new(),
            verdict: ConcatVerdict::HypothesisFailure(reason),
        });
    }

    let mut multisets = Vec::with_capacity(presentation.num_relators());
    for (i, r) in presentation.relators.iter().enumerate() {
        match extremal_multiset(target, &assignment, i, r, mode) {
            Ok(m) => multisets.push(m),
            Err(MinimaError::Order(e)) => return Err(e),
            Err(e) => {
                return Ok(PresentationCheck {
                    hypotheses,
                    flips,
                    presentation,
                    assignment,
                    multisets,
                    verdict: ConcatVerdict::HypothesisFailure(format!("relator {i}: {e}")),
                })
            }
        }
    }
    let verdict = match weak_concatenability(&multisets) {
        Ok(Concatenability::Concatenable(c)) => ConcatVerdict::Concatenable(c),
        Ok(Concatenability::NotConcatenable(f)) => ConcatVerdict::NotConcatenable(f),
        Err(e) => ConcatVerdict::HypothesisFailure(e.to_string()),
    };
    Ok(PresentationCheck { hypotheses, flips, presentation, assignment, multisets, verdict })
}
