//! Finite windows of the infinite cyclic cover of a presentation complex and
//! the check that a concatenation certificate yields a weakly slim structure
//! on it.
//!
//! Levels are the 0-cells `j ∈ [lo, hi]`. The edge `a_{j,g}` is the lift of
//! generator `g` starting at level `j`. The 2-cell `R_{j,i}` is the lift of
//! relator `i` whose lowest level is `j`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::minima::{minima_multiset, replay_certificate, ConcatCertificate};
use crate::orders::{Assignment, IntTarget};
use crate::presentation::{Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("generator {gen} has negative weight; invert it first")]
    NegativeWeight { gen: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("relator {relator} has nonzero weight")]
    RelatorWeight { relator: usize },
    #[error("relator {relator} is empty")]
    EmptyRelator { relator: usize },
    #[error("window [{lo}, {hi}] is narrower than the largest relator span {span}")]
    WindowTooSmall { lo: i64, hi: i64, span: i64 },
    #[error("certificate rejected: {}", summarize(.0))]
    CertificateMismatch(Vec<CheckFailure>),
}

fn summarize(f: &[CheckFailure]) -> String {
    let first = f.first().map(|x| x.to_string()).unwrap_or_default();
    if f.len() > 1 {
        format!("{first} (and {} more)", f.len() - 1)
    } else {
        first
    }
}

/// Key of the edge order: level ascending, then reindexed generator
/// descending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeOrderKey {
    pub level: i64,
    pub index: usize,
}

impl Ord for EdgeOrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level.cmp(&other.level).then(other.index.cmp(&self.index))
    }
}

impl PartialOrd for EdgeOrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl EdgeOrderKey {
    pub fn shifted(self, by: i64) -> Self {
        EdgeOrderKey { level: self.level + by, index: self.index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverEdge {
    pub level: i64,
    pub gen: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Traversal {
    pub edge: CoverEdge,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCell {
    pub relator: usize,
    pub level: i64,
    pub boundary: Vec<Traversal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWindow {
    pub lo: i64,
    pub hi: i64,
    pub weights: Vec<i64>,
    pub edges: Vec<CoverEdge>,
    pub cells: Vec<CoverCell>,
}

/// Profile minimum and maximum of a relator, both taken with `v_0 = 0`.
fn relator_range(r: &Word, weights: &[i64]) -> (i64, i64, i64) {
    let mut v = 0i64;
    let (mut lo, mut hi) = (0i64, 0i64);
    for l in r.iter() {
        v += l.sign() * weights[l.gen];
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi, v)
}

/// Level span `max − min` of a relator's walk.
pub fn relator_span(r: &Word, weights: &[i64]) -> i64 {
    let (lo, hi, _) = relator_range(r, weights);
    hi - lo
}

/// Boundary of `R_{level, relator}`: the walk starts at `level − μ` where `μ`
/// is the profile minimum, so the lowest level visited is `level`.
pub fn lifted_boundary(r: &Word, weights: &[i64], level: i64) -> Vec<Traversal> {
    let (mu, _, _) = relator_range(r, weights);
    let mut at = level - mu;
    r.iter()
        .map(|l| {
            let w = weights[l.gen];
            if l.inverse {
                at -= w;
                Traversal { edge: CoverEdge { level: at, gen: l.gen }, forward: false }
            } else {
                let t = Traversal { edge: CoverEdge { level: at, gen: l.gen }, forward: true };
                at += w;
                t
            }
        })
        .collect()
}

fn check_weights(p: &Presentation, weights: &[i64]) -> Result<(), CoverError> {
    if weights.len() != p.num_generators() {
        return Err(CoverError::WeightCount { expected: p.num_generators(), got: weights.len() });
    }
    if let Some(gen) = weights.iter().position(|&w| w < 0) {
        return Err(CoverError::NegativeWeight { gen });
    }
    for (relator, r) in p.relators.iter().enumerate() {
        if r.is_empty() {
            return Err(CoverError::EmptyRelator { relator });
        }
        if relator_range(r, weights).2 != 0 {
            return Err(CoverError::RelatorWeight { relator });
        }
    }
    Ok(())
}

/// All edges with both ends in `[lo, hi]` and all 2-cells whose boundary
/// fits in the window.
pub fn build_cover_window(p: &Presentation, weights: &[i64], lo: i64, hi: i64) -> Result<CoverWindow, CoverError> {
    check_weights(p, weights)?;
    let spans: Vec<i64> = p.relators.iter().map(|r| relator_span(r, weights)).collect();
    let span = spans.iter().copied().max().unwrap_or(0);
    if hi < lo || hi - lo < span {
        return Err(CoverError::WindowTooSmall { lo, hi, span });
    }
    let mut edges = Vec::new();
    for level in lo..=hi {
        for (gen, &w) in weights.iter().enumerate() {
            if level + w <= hi {
                edges.push(CoverEdge { level, gen });
            }
        }
    }
    let mut cells = Vec::new();
    for (relator, r) in p.relators.iter().enumerate() {
        for level in lo..=hi - spans[relator] {
            cells.push(CoverCell { relator, level, boundary: lifted_boundary(r, weights, level) });
        }
    }
    Ok(CoverWindow { lo, hi, weights: weights.to_vec(), edges, cells })
}

/// A concatenation certificate together with the generator reindexing it
/// induces: the witness of step `s` (1-based) gets index `n − k + s`, the
/// other generators get `1..=n − k` in their original order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlimCertificate {
    pub certificate: ConcatCertificate,
    /// generator → new 1-based index
    pub reindex: Vec<usize>,
    /// relator → witness generator
    pub witness: BTreeMap<usize, usize>,
}

impl SlimCertificate {
    pub fn new(certificate: ConcatCertificate, generators: usize) -> Result<Self, CheckFailure> {
        let k = certificate.witnesses.len();
        let mut reindex = vec![0usize; generators];
        let mut witness = BTreeMap::new();
        for (s, w) in certificate.witnesses.iter().enumerate() {
            if w.gen >= generators || reindex[w.gen] != 0 {
                return Err(CheckFailure::Replay { detail: format!("witness generator {} reused or out of range", w.gen) });
            }
            if k > generators {
                return Err(CheckFailure::Replay { detail: "more relators than generators".into() });
            }
            reindex[w.gen] = generators - k + s + 1;
            witness.insert(w.relator, w.gen);
        }
        for (next, slot) in (1..).zip(reindex.iter_mut().filter(|x| **x == 0)) {
            *slot = next;
        }
        Ok(SlimCertificate { certificate, reindex, witness })
    }

    pub fn key(&self, e: CoverEdge) -> EdgeOrderKey {
        EdgeOrderKey { level: e.level, index: self.reindex[e.gen] }
    }
}

/// One violated condition, pinned to the cell where it failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum CheckFailure {
    #[serde(rename = "replay")]
    Replay { detail: String },
    /// (a) the minimal edge is not the lift of the witness at the cell's level
    #[serde(rename = "a")]
    MinEdge { relator: usize, level: i64, expected: CoverEdge, found: CoverEdge },
    /// (b) signed traversal count of the minimal edge disagrees or vanishes
    #[serde(rename = "b")]
    SignedCount { relator: usize, level: i64, count: i64, expected: i64 },
    /// (c) `min(R₁)` lies on `∂R₂` but is not larger than `min(R₂)`
    #[serde(rename = "c")]
    Order { cell: (usize, i64), other: (usize, i64) },
    /// (d) key comparison changes under deck translation
    #[serde(rename = "d")]
    Shift { first: CoverEdge, second: CoverEdge },
    #[serde(rename = "simple")]
    ProperPower { relator: usize },
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckFailure::Replay { detail } => write!(f, "certificate does not replay: {detail}"),
            CheckFailure::MinEdge { relator, level, expected, found } => write!(
                f,
                "(a) R[{level},{relator}]: minimal edge is a[{},{}], expected a[{},{}]",
                found.level, found.gen, expected.level, expected.gen
            ),
            CheckFailure::SignedCount { relator, level, count, expected } => {
                write!(f, "(b) R[{level},{relator}]: witness edge traversed {count} times (signed), expected {expected} != 0")
            }
            CheckFailure::Order { cell, other } => write!(
                f,
                "(c) min(R[{},{}]) lies on the boundary of R[{},{}] but is not larger than its minimum",
                cell.1, cell.0, other.1, other.0
            ),
            CheckFailure::Shift { first, second } => write!(
                f,
                "(d) comparison of a[{},{}] and a[{},{}] changes under translation",
                first.level, first.gen, second.level, second.gen
            ),
            CheckFailure::ProperPower { relator } => write!(f, "relator {relator} is a proper power"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCheck {
    pub relator: usize,
    pub level: i64,
    pub min_edge: CoverEdge,
    pub witness: usize,
    pub signed_count: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub lo: i64,
    pub hi: i64,
    pub slim: SlimCertificate,
    pub cells: Vec<CellCheck>,
    /// relator → signed traversal count of its witness edge
    pub signed_counts: BTreeMap<usize, i64>,
    pub checks: Vec<&'static str>,
}

pub const CHECKS: [&str; 5] = [
    "(a) min edge of R[j,i] is the witness lift a[j,i]",
    "(b) witness edge has nonzero signed traversal count equal to pos - neg",
    "(c) min(R1) on the boundary of R2 implies min(R1) > min(R2)",
    "(d) edge order is invariant under deck translation",
    "relators are not proper powers (syntactic necessary condition; sufficiency from the cited theorem)",
];

/// The strictly smallest edge on a cell boundary.
pub fn min_edge(cell: &CoverCell, slim: &SlimCertificate) -> CoverEdge {
    cell.boundary
        .iter()
        .map(|t| t.edge)
        .min_by_key(|&e| slim.key(e))
        .expect("cells have nonempty boundary")
}

/// Checks conditions (a) to (d) and the proper-power condition on every
/// cell of the window. All failures are collected.
pub fn verify_weak_slim_certificate(
    p: &Presentation,
    weights: &[i64],
    cert: &ConcatCertificate,
    window: &CoverWindow,
) -> Result<CoverReport, CoverError> {
    check_weights(p, weights)?;
    let mut failures = Vec::new();

    let assignment = Assignment::<BigInt>::from_weights(weights);
    let multisets: Vec<_> = p
        .relators
        .iter()
        .enumerate()
        .map(|(i, r)| minima_multiset(&IntTarget, &assignment, i, r).expect("weights checked"))
        .collect();
    if let Err(e) = replay_certificate(cert, &multisets) {
        failures.push(CheckFailure::Replay { detail: e.to_string() });
    }
    let slim = match SlimCertificate::new(cert.clone(), p.num_generators()) {
        Ok(s) if s.witness.len() == p.num_relators() => s,
        Ok(_) => {
            failures.push(CheckFailure::Replay { detail: "not every relator has a witness".into() });
            return Err(CoverError::CertificateMismatch(failures));
        }
        Err(f) => {
            failures.push(f);
            return Err(CoverError::CertificateMismatch(failures));
        }
    };
    let expected_count: HashMap<usize, i64> =
        cert.witnesses.iter().map(|w| (w.relator, w.pos as i64 - w.neg as i64)).collect();

    let mut cells = Vec::with_capacity(window.cells.len());
    let mut by_min: HashMap<CoverEdge, Vec<usize>> = HashMap::new();
    for (c, cell) in window.cells.iter().enumerate() {
        let witness = slim.witness[&cell.relator];
        let expected = CoverEdge { level: cell.level, gen: witness };
        let found = min_edge(cell, &slim);
        if found != expected {
            failures.push(CheckFailure::MinEdge { relator: cell.relator, level: cell.level, expected, found });
        }
        let count: i64 = cell
            .boundary
            .iter()
            .filter(|t| t.edge == expected)
            .map(|t| if t.forward { 1 } else { -1 })
            .sum();
        let want = expected_count[&cell.relator];
        if count == 0 || count != want {
            failures.push(CheckFailure::SignedCount { relator: cell.relator, level: cell.level, count, expected: want });
        }
        by_min.entry(found).or_default().push(c);
        cells.push(CellCheck { relator: cell.relator, level: cell.level, min_edge: found, witness, signed_count: count });
    }

    for (c2, cell) in window.cells.iter().enumerate() {
        let own = slim.key(cells[c2].min_edge);
        for t in &cell.boundary {
            for &c1 in by_min.get(&t.edge).into_iter().flatten() {
                if c1 != c2 && slim.key(cells[c1].min_edge) <= own {
                    let f = CheckFailure::Order {
                        cell: (window.cells[c1].relator, window.cells[c1].level),
                        other: (cell.relator, cell.level),
                    };
                    if !failures.contains(&f) {
                        failures.push(f);
                    }
                }
            }
        }
    }

    for (x, &e1) in window.edges.iter().enumerate() {
        for &e2 in &window.edges[x + 1..] {
            let before = slim.key(e1).cmp(&slim.key(e2));
            if before != slim.key(e1).shifted(1).cmp(&slim.key(e2).shifted(1)) {
                failures.push(CheckFailure::Shift { first: e1, second: e2 });
            }
        }
    }

    for (relator, r) in p.relators.iter().enumerate() {
        if r.is_proper_power() {
            failures.push(CheckFailure::ProperPower { relator });
        }
    }

    if !failures.is_empty() {
        return Err(CoverError::CertificateMismatch(failures));
    }
    Ok(CoverReport {
        lo: window.lo,
        hi: window.hi,
        slim,
        cells,
        signed_counts: expected_count.into_iter().collect(),
        checks: CHECKS.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minima::{weak_concatenability, Witness};

    fn w(x: &[i64]) -> Word {
        Word::from_signed(x)
    }

    fn first_example() -> Presentation {
        Presentation::from_names(&["a", "b", "c"], vec![w(&[-1, 2]), w(&[-2, 3, 1, 2, -1, -3, -2, 3])])
    }

    fn e(level: i64, gen: usize) -> CoverEdge {
        CoverEdge { level, gen }
    }

    #[test]
    fn key_order() {
        let k = |level, index| EdgeOrderKey { level, index };
        assert!(k(0, 3) < k(0, 1));
        assert!(k(-1, 1) < k(0, 3));
        assert_eq!(k(2, 2).shifted(-2), k(0, 2));
    }

    #[test]
    fn boundary_of_short_relator() {
        let b = lifted_boundary(&w(&[-1, 2]), &[1, 1], 0);
        assert_eq!(
            b,
            vec![Traversal { edge: e(0, 0), forward: false }, Traversal { edge: e(0, 1), forward: true }]
        );
        let shifted = lifted_boundary(&w(&[-1, 2]), &[1, 1], 1);
        assert!(shifted.iter().zip(&b).all(|(s, t)| s.edge.level == t.edge.level + 1 && s.forward == t.forward));
    }

    #[test]
    fn window_contents() {
        let p = first_example();
        assert_eq!(relator_span(&p.relators[1], &[1, 1, 1]), 3);
        let win = build_cover_window(&p, &[1, 1, 1], -3, 3).unwrap();
        let levels: Vec<i64> = win.cells.iter().filter(|c| c.relator == 1).map(|c| c.level).collect();
        assert_eq!(levels, vec![-3, -2, -1, 0]);
        assert!(matches!(build_cover_window(&p, &[1, 1, 1], 0, 2), Err(CoverError::WindowTooSmall { span: 3, .. })));

        let q = Presentation::from_names(&["a", "b"], vec![w(&[-1, 2])]);
        let win = build_cover_window(&q, &[1, 1], 0, 1).unwrap();
        assert_eq!(win.cells.len(), 1);
        assert_eq!(win.cells[0].boundary.len(), 2);

        let free = Presentation::from_names(&["a"], vec![]);
        let win = build_cover_window(&free, &[1], 0, 2).unwrap();
        assert!(win.cells.is_empty());
        assert_eq!(win.edges.len(), 2);
    }

    #[test]
    fn boundaries_close_and_project() {
        let p = first_example();
        let win = build_cover_window(&p, &[1, 1, 1], -4, 4).unwrap();
        for cell in &win.cells {
            let r = &p.relators[cell.relator];
            let letters: Vec<(usize, bool)> = cell.boundary.iter().map(|t| (t.edge.gen, !t.forward)).collect();
            let expect: Vec<(usize, bool)> = r.iter().map(|l| (l.gen, l.inverse)).collect();
            assert_eq!(letters, expect);
            let lowest = cell.boundary.iter().map(|t| t.edge.level).min().unwrap();
            assert_eq!(lowest, cell.level);
        }
    }

    #[test]
    fn first_example_certificate_verifies() {
        let p = first_example();
        let ones = Assignment::<BigInt>::from_weights(&[1, 1, 1]);
        let ms: Vec<_> =
            p.relators.iter().enumerate().map(|(i, r)| minima_multiset(&IntTarget, &ones, i, r).unwrap()).collect();
        let cert = weak_concatenability(&ms).unwrap().certificate().unwrap().clone();
        let win = build_cover_window(&p, &[1, 1, 1], -4, 4).unwrap();
        let report = verify_weak_slim_certificate(&p, &[1, 1, 1], &cert, &win).unwrap();
        assert_eq!(report.signed_counts, BTreeMap::from([(0, -1), (1, 2)]));
        assert_eq!(report.slim.reindex, vec![2, 1, 3]);
        for c in &report.cells {
            assert_eq!(c.min_edge, e(c.level, c.witness));
        }
    }

    #[test]
    fn swapped_witnesses_are_rejected() {
        let p = first_example();
        let win = build_cover_window(&p, &[1, 1, 1], -4, 4).unwrap();
        let cert = ConcatCertificate {
            ordering: vec![0, 1],
            witnesses: vec![
                Witness { relator: 0, gen: 2, pos: 2, neg: 0 },
                Witness { relator: 1, gen: 0, pos: 0, neg: 1 },
            ],
        };
        let Err(CoverError::CertificateMismatch(f)) = verify_weak_slim_certificate(&p, &[1, 1, 1], &cert, &win) else {
            panic!("tampered certificate accepted")
        };
        assert!(f.iter().any(|x| matches!(x, CheckFailure::SignedCount { relator: 0, .. })), "{f:?}");
    }
}
