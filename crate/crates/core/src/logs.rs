//! Labelled oriented graphs, Adian presentations, the graphs `I` and `T`,
//! and Artin presentations.
//!
//! For a pair `u = v` of positive words, `I` joins the first letters of `u`
//! and `v` and `T` joins their last letters. With all weights 1 the minima of
//! `u v⁻¹` sit at its first letters and the maxima at its last letters, so an
//! acyclic `I` gives weak concatenability for minima and an acyclic `T` for
//! maxima.

use std::collections::VecDeque;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::homology::is_generalized_wirtinger;
use crate::minima::{check_presentation, ConcatCertificate, ConcatVerdict, Mode};
use crate::orders::{Assignment, IntTarget, OrderError};
use crate::presentation::{Letter, Presentation, Word};
use crate::verdict::{first_failure, Criterion, Hypothesis, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogsError {
    #[error("forest test and concatenability disagree ({mode:?} mode): {detail}")]
    CrossCheckFailed { mode: Mode, detail: String },
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LogEdge {
    pub i: usize,
    pub lambda: usize,
    pub t: usize,
}

/// A labelled oriented graph: every edge `i → t` carries a vertex label `λ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Log {
    pub vertices: Vec<String>,
    pub edges: Vec<LogEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LogDiagnostic {
    /// `i = λ`: the relator has a cancelling pair.
    InitialIsLabel { edge: usize },
    /// `t = λ`.
    TerminalIsLabel { edge: usize },
}

impl std::fmt::Display for LogDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LogDiagnostic::InitialIsLabel { edge } => write!(f, "edge {edge}: initial vertex equals label"),
            LogDiagnostic::TerminalIsLabel { edge } => write!(f, "edge {edge}: terminal vertex equals label"),
        }
    }
}

impl Log {
    /// One relator `t⁻¹ λ⁻¹ i λ` per edge.
    pub fn to_presentation(&self) -> Presentation {
        let relators = self
            .edges
            .iter()
            .map(|e| Word::new(vec![Letter::neg(e.t), Letter::neg(e.lambda), Letter::pos(e.i), Letter::pos(e.lambda)]))
            .collect();
        Presentation::new(self.vertices.clone(), relators)
    }

    /// Reduced here means every relator is cyclically reduced, i.e.
    /// `i ≠ λ` and `t ≠ λ` on every edge.
    pub fn reduction_diagnostics(&self) -> Vec<LogDiagnostic> {
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if e.i == e.lambda {
                out.push(LogDiagnostic::InitialIsLabel { edge: k });
            }
            if e.t == e.lambda {
                out.push(LogDiagnostic::TerminalIsLabel { edge: k });
            }
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.reduction_diagnostics().is_empty()
    }

    /// `I(Γ)`: `u = iλ`, `v = λt`, first letters `{i, λ}`.
    pub fn graph_i(&self) -> Multigraph {
        Multigraph::new(self.vertices.len(), self.edges.iter().map(|e| (e.i, e.lambda)).collect())
    }

    /// `T(Γ)`: last letters `{λ, t}`.
    pub fn graph_t(&self) -> Multigraph {
        Multigraph::new(self.vertices.len(), self.edges.iter().map(|e| (e.lambda, e.t)).collect())
    }

    /// The underlying oriented graph ignores labels.
    pub fn underlying(&self) -> Multigraph {
        Multigraph::new(self.vertices.len(), self.edges.iter().map(|e| (e.i, e.t)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdianPair {
    pub u: Word,
    pub v: Word,
    /// The relator equals `u v⁻¹` after rotating left by this amount.
    pub rotation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdianForm {
    pub pairs: Vec<AdianPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("relator {relator} is not of the form u v^-1: {reason}")]
pub struct NotAdian {
    pub relator: usize,
    pub reason: String,
}

/// Splits a cyclic word into one positive block followed by one negative block.
pub fn adian_pair(r: &Word) -> Result<AdianPair, String> {
    let n = r.len();
    if n == 0 {
        return Err("empty relator".into());
    }
    let letters = r.letters();
    let starts: Vec<usize> = (0..n)
        .filter(|&p| !letters[p].inverse && letters[(p + n - 1) % n].inverse)
        .collect();
    match starts.as_slice() {
        [] => Err(if letters[0].inverse { "no positive letters" } else { "no negative letters" }.into()),
        [p] => {
            let rotated = r.rotate(*p);
            let split = rotated.iter().position(|l| l.inverse).expect("has a negative letter");
            let u = Word::new(rotated.letters()[..split].to_vec());
            let v = Word::new(rotated.letters()[split..].to_vec()).inverse();
            Ok(AdianPair { u, v, rotation: *p })
        }
        _ => Err(format!("{} positive blocks", starts.len())),
    }
}

pub fn adian_normalize(p: &Presentation) -> Result<AdianForm, NotAdian> {
    let pairs = p
        .relators
        .iter()
        .enumerate()
        .map(|(relator, r)| adian_pair(r).map_err(|reason| NotAdian { relator, reason }))
        .collect::<Result<_, _>>()?;
    Ok(AdianForm { pairs })
}

impl AdianForm {
    pub fn graph_i(&self, vertices: usize) -> Multigraph {
        let first = |w: &Word| w.letters()[0].gen;
        Multigraph::new(vertices, self.pairs.iter().map(|p| (first(&p.u), first(&p.v))).collect())
    }

    pub fn graph_t(&self, vertices: usize) -> Multigraph {
        let last = |w: &Word| w.letters()[w.len() - 1].gen;
        Multigraph::new(vertices, self.pairs.iter().map(|p| (last(&p.u), last(&p.v))).collect())
    }
}

/// Undirected multigraph on vertices `0..vertices`. Loops allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Multigraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        Multigraph { vertices, edges }
    }

    /// Edge multiset with endpoints sorted, for comparisons.
    pub fn normalized_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        e.sort_unstable();
        e
    }

    /// `Ok(())` for a forest, otherwise the edge indices of one cycle. Loops
    /// and parallel edges are cycles.
    pub fn find_cycle(&self) -> Result<(), Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertices];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                return Err(vec![k]);
            }
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra == rb {
                let mut path = tree_path(&tree, a, b);
                path.push(k);
                return Err(path);
            }
            parent[ra] = rb;
            tree[a].push((b, k));
            tree[b].push((a, k));
        }
        Ok(())
    }

    pub fn is_forest(&self) -> bool {
        self.find_cycle().is_ok()
    }
}

/// Edge indices along the unique forest path from `a` to `b`.
fn tree_path(tree: &[Vec<(usize, usize)>], a: usize, b: usize) -> Vec<usize> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; tree.len()];
    let mut seen = vec![false; tree.len()];
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &(y, k) in &tree[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, k));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut x = b;
    while let Some((p, k)) = prev[x] {
        path.push(k);
        x = p;
    }
    path.reverse();
    path
}

/// Result of the forest criterion on an Adian presentation or a LOF.
#[derive(Clone, Debug)]
pub struct ForestReport {
    pub hypotheses: Vec<Hypothesis>,
    pub form: Option<AdianForm>,
    pub graph_i: Option<Multigraph>,
    pub graph_t: Option<Multigraph>,
    /// `None` when the graph is a forest.
    pub i_cycle: Option<Vec<usize>>,
    pub t_cycle: Option<Vec<usize>>,
    pub min_certificate: Option<ConcatCertificate>,
    pub max_certificate: Option<ConcatCertificate>,
    pub verdict: Verdict,
}

pub const CITE_ADIAN: &str = "Thm 4.1: Adian presentation u_i = v_i";
pub const CITE_LENGTHS: &str = "Thm 4.1: l(u_i) = l(v_i)";
pub const CITE_H1: &str = "Thm 4.1: H1(G) nontrivial free abelian of rank n-k";
pub const CITE_REDUCED_LOF: &str = "Cor 4.3: reduced labelled oriented forest";

fn failed(hypotheses: Vec<Hypothesis>, form: Option<AdianForm>) -> ForestReport {
    let h = first_failure(&hypotheses).expect("called on failure");
    let verdict = Verdict::HypothesisFailure(format!("{}: {}", h.name, h.detail));
    ForestReport {
        hypotheses,
        form,
        graph_i: None,
        graph_t: None,
        i_cycle: None,
        t_cycle: None,
        min_certificate: None,
        max_certificate: None,
        verdict,
    }
}

/// Runs the all-ones concatenability check that an acyclic graph promises.
fn forest_branch(p: &Presentation, mode: Mode) -> Result<ConcatCertificate, LogsError> {
    let ones = Assignment::<BigInt>::from_weights(&vec![1; p.num_generators()]);
    let check = check_presentation(p, &IntTarget, &ones, mode)?;
    match check.verdict {
        ConcatVerdict::Concatenable(c) => Ok(c),
        ConcatVerdict::NotConcatenable(f) => {
            Err(LogsError::CrossCheckFailed { mode, detail: format!("maximal placeable sets {:?}", f.maximal_placeable) })
        }
        ConcatVerdict::HypothesisFailure(reason) => Err(LogsError::CrossCheckFailed { mode, detail: reason }),
    }
}

fn forest_criterion(
    p: &Presentation,
    mut hypotheses: Vec<Hypothesis>,
    criterion: Criterion,
) -> Result<ForestReport, LogsError> {
    let form = match adian_normalize(p) {
        Ok(f) => {
            hypotheses.push(Hypothesis::check("Adian presentation", true, CITE_ADIAN, "every relator is u v^-1 with u, v positive"));
            f
        }
        Err(e) => {
            hypotheses.push(Hypothesis::check("Adian presentation", false, CITE_ADIAN, e.to_string()));
            return Ok(failed(hypotheses, None));
        }
    };
    let uneven: Vec<String> = form
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, pr)| pr.u.len() != pr.v.len())
        .map(|(k, pr)| format!("relator {k}: {} vs {}", pr.u.len(), pr.v.len()))
        .collect();
    hypotheses.push(Hypothesis::check(
        "equal side lengths",
        uneven.is_empty(),
        CITE_LENGTHS,
        if uneven.is_empty() { "l(u) = l(v) for every relator".to_string() } else { uneven.join("; ") },
    ));
    let wirt = is_generalized_wirtinger(p);
    hypotheses.push(Hypothesis::check("generalized Wirtinger", wirt.holds, CITE_H1, wirt.reason));
    if first_failure(&hypotheses).is_some() {
        return Ok(failed(hypotheses, Some(form)));
    }

    let n = p.num_generators();
    let (gi, gt) = (form.graph_i(n), form.graph_t(n));
    let i_cycle = gi.find_cycle().err();
    let t_cycle = gt.find_cycle().err();
    let min_certificate = if i_cycle.is_none() { Some(forest_branch(p, Mode::Min)?) } else { None };
    let max_certificate = if t_cycle.is_none() { Some(forest_branch(p, Mode::Max)?) } else { None };
    let verdict = if min_certificate.is_some() || max_certificate.is_some() {
        Verdict::NpiCertified(criterion)
    } else {
        Verdict::NotDecided
    };
    Ok(ForestReport {
        hypotheses,
        form: Some(form),
        graph_i: Some(gi),
        graph_t: Some(gt),
        i_cycle,
        t_cycle,
        min_certificate,
        max_certificate,
        verdict,
    })
}

/// The forest criterion for Adian presentations with equal-length sides.
///
/// Whenever `I` (resp. `T`) is a forest, the all-ones minima (resp. maxima)
/// concatenability check is run as well and must agree; a disagreement is
/// reported as [`LogsError::CrossCheckFailed`].
pub fn adian_npi_check(p: &Presentation) -> Result<ForestReport, LogsError> {
    forest_criterion(p, Vec::new(), Criterion::AdianForest)
}

/// The forest criterion for a labelled oriented forest.
pub fn lof_npi_check(log: &Log) -> Result<ForestReport, LogsError> {
    let diags = log.reduction_diagnostics();
    let hyp = Hypothesis::check(
        "reduced",
        diags.is_empty(),
        CITE_REDUCED_LOF,
        if diags.is_empty() {
            "no edge has its label at an endpoint".to_string()
        } else {
            diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
        },
    );
    let forest = log.underlying().find_cycle();
    let forest_hyp = Hypothesis::check(
        "underlying graph is a forest",
        forest.is_ok(),
        CITE_REDUCED_LOF,
        match &forest {
            Ok(()) => "no cycles".to_string(),
            Err(c) => format!("cycle through edges {c:?}"),
        },
    );
    let hypotheses = vec![hyp, forest_hyp];
    if first_failure(&hypotheses).is_some() {
        return Ok(failed(hypotheses, None));
    }
    forest_criterion(&log.to_presentation(), hypotheses, Criterion::LofForest)
}

/// Simple graph with Artin labels `m_st ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArtinError {
    #[error("edge {0} is a loop")]
    Loop(usize),
    #[error("edge {0} duplicates an earlier edge")]
    Parallel(usize),
    #[error("edge {edge} has label {label}; labels must be at least 2")]
    BadLabel { edge: usize, label: u32 },
    #[error("edge {0} refers to an unknown vertex")]
    UnknownVertex(usize),
}

impl PresentationGraph {
    pub fn validate(&self) -> Result<(), ArtinError> {
        let mut seen = std::collections::HashSet::new();
        for (k, &(s, t, m)) in self.edges.iter().enumerate() {
            if s >= self.vertices.len() || t >= self.vertices.len() {
                return Err(ArtinError::UnknownVertex(k));
            }
            if s == t {
                return Err(ArtinError::Loop(k));
            }
            if m < 2 {
                return Err(ArtinError::BadLabel { edge: k, label: m });
            }
            if !seen.insert((s.min(t), s.max(t))) {
                return Err(ArtinError::Parallel(k));
            }
        }
        Ok(())
    }
}

fn alternating(s: usize, t: usize, m: u32) -> Word {
    (0..m as usize).map(|k| Letter::pos(if k % 2 == 0 { s } else { t })).collect()
}

/// `⟨S | sts⋯ = tst⋯⟩`, one relator `(sts⋯)(tst⋯)⁻¹` of length `2 m_st`
/// per edge.
pub fn artin_presentation(g: &PresentationGraph) -> Result<Presentation, ArtinError> {
    g.validate()?;
    let relators = g
        .edges
        .iter()
        .map(|&(s, t, m)| alternating(s, t, m).concat(&alternating(t, s, m).inverse()))
        .collect();
    Ok(Presentation::new(g.vertices.clone(), relators))
}

/// Parameters for [`lof_random`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LofSpec {
    pub vertices: usize,
    /// Delete each tree edge with probability 1/4 to get a forest.
    pub forest: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LofError {
    #[error("need at least 2 vertices")]
    TooFewVertices,
    #[error("no reduced labelling exists on {0} vertices")]
    Unsatisfiable(usize),
}

pub fn vertex_name(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("v{k}")
    }
}

/// Samples a reduced labelled oriented tree (or forest) from a seed: a
/// uniform labelled tree via a random Prüfer sequence, random orientations,
/// and for each edge a uniform label among the vertices other than its
/// endpoints.
pub fn lof_random(spec: LofSpec, seed: u64) -> Result<Log, LofError> {
    let n = spec.vertices;
    if n < 2 {
        return Err(LofError::TooFewVertices);
    }
    if n == 2 {
        return Err(LofError::Unsatisfiable(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for (a, b) in prufer_edges(&prufer, n) {
        if spec.forest && rng.gen_ratio(1, 4) {
            continue;
        }
        let (i, t) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let choices: Vec<usize> = (0..n).filter(|&v| v != i && v != t).collect();
        let lambda = *choices.choose(&mut rng).expect("n >= 3");
        edges.push(LogEdge { i, lambda, t });
    }
    Ok(Log { vertices: (0..n).map(vertex_name).collect(), edges })
}

fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}
