//! Bounded enumeration of immersions `Y ↬ K` into a presentation complex and
//! a check of the dichotomy "χ(Y) ≤ 0 or Y is contractible", with
//! collapsibility standing in for contractibility.
//!
//! An immersion is encoded by labels: `Y` is a connected graph whose edges
//! carry generators, folded (no two edge ends at a vertex with the same label
//! and direction), plus faces. A face is a relator index and the vertex where
//! reading the relator starts; reading is deterministic in a folded graph.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::presentation::{Letter, Presentation};

pub const MAX_EDGES: usize = 10;
pub const MAX_FACES: usize = 5;
pub const COLLAPSE_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("bounds ({edges}, {faces}) exceed the limits ({MAX_EDGES}, {MAX_FACES})")]
    BoundsTooLarge { edges: usize, faces: usize },
    #[error("collapse search exceeded {0} states")]
    SearchBudgetExceeded(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub gen: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face {
    pub relator: usize,
    pub start: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TwoComplex {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
}

/// `(gen, outgoing)` edge end at a vertex.
type End = (usize, bool);

impl TwoComplex {
    pub fn point() -> Self {
        TwoComplex { vertices: 1, edges: Vec::new(), faces: Vec::new() }
    }

    fn ends(&self) -> Vec<Vec<(End, usize)>> {
        let mut ends = vec![Vec::new(); self.vertices];
        for (k, e) in self.edges.iter().enumerate() {
            ends[e.src].push(((e.gen, true), k));
            ends[e.dst].push(((e.gen, false), k));
        }
        ends
    }

    /// Edge leaving `v` along letter `l`, with the vertex it reaches.
    fn step(&self, v: usize, l: Letter) -> Option<(usize, usize)> {
        self.edges.iter().enumerate().find_map(|(k, e)| {
            if e.gen != l.gen {
                None
            } else if !l.inverse && e.src == v {
                Some((k, e.dst))
            } else if l.inverse && e.dst == v {
                Some((k, e.src))
            } else {
                None
            }
        })
    }

    /// Vertices and edges visited when reading relator `relator` from
    /// `start`; `None` unless the reading exists and closes up.
    pub fn face_path(&self, p: &Presentation, face: Face) -> Option<(Vec<usize>, Vec<usize>)> {
        let r = p.relators.get(face.relator)?;
        let mut at = face.start;
        let mut verts = Vec::with_capacity(r.len());
        let mut edges = Vec::with_capacity(r.len());
        for l in r.iter() {
            verts.push(at);
            let (k, next) = self.step(at, l)?;
            edges.push(k);
            at = next;
        }
        (at == face.start).then_some((verts, edges))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let ends = self.ends();
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(_, k) in &ends[v] {
                let e = self.edges[k];
                for w in [e.src, e.dst] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// No vertex has two edge ends with the same label and direction.
pub fn is_folded(y: &TwoComplex) -> bool {
    y.ends().iter().all(|ends| {
        let mut seen = HashSet::new();
        ends.iter().all(|(end, _)| seen.insert(*end))
    })
}

/// Every face reads its relator along a closed path, and no vertex carries two
/// face corners with the same image `(relator, position)`.
pub fn link_injective(y: &TwoComplex, p: &Presentation) -> bool {
    let mut corners = HashSet::new();
    for &f in &y.faces {
        let Some((verts, _)) = y.face_path(p, f) else {
            return false;
        };
        for (pos, v) in verts.into_iter().enumerate() {
            if !corners.insert((v, f.relator, pos)) {
                return false;
            }
        }
    }
    true
}

struct CollapseSearch {
    /// per face: edge traversal counts
    face_edges: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    vertices: usize,
    failed: HashSet<(u32, u32, u32)>,
    budget: usize,
}

impl CollapseSearch {
    fn run(&mut self, faces: u32, edges: u32, verts: u32) -> Result<bool, OracleError> {
        if faces == 0 && edges == 0 && verts.count_ones() == 1 {
            return Ok(true);
        }
        if self.failed.contains(&(faces, edges, verts)) {
            return Ok(false);
        }
        if self.failed.len() >= self.budget {
            return Err(OracleError::SearchBudgetExceeded(self.budget));
        }
        // free edge: exactly one traversal across all alive faces
        for e in 0..self.edges.len() {
            if edges & (1 << e) == 0 {
                continue;
            }
            let mut uses = 0;
            let mut owner = 0;
            for (f, fe) in self.face_edges.iter().enumerate() {
                if faces & (1 << f) != 0 {
                    let c = fe.iter().filter(|&&x| x == e).count();
                    if c > 0 {
                        owner = f;
                    }
                    uses += c;
                }
            }
            if uses == 1 && self.run(faces & !(1 << owner), edges & !(1 << e), verts)? {
                return Ok(true);
            }
        }
        // leaf: a vertex with a single incident non-loop edge that lies on no face
        for v in 0..self.vertices {
            if verts & (1 << v) == 0 {
                continue;
            }
            let incident: Vec<usize> = (0..self.edges.len())
                .filter(|&e| edges & (1 << e) != 0 && (self.edges[e].src == v || self.edges[e].dst == v))
                .collect();
            if let [e] = incident[..] {
                let edge = self.edges[e];
                let on_face = self
                    .face_edges
                    .iter()
                    .enumerate()
                    .any(|(f, fe)| faces & (1 << f) != 0 && fe.contains(&e));
                if edge.src != edge.dst && !on_face && self.run(faces, edges & !(1 << e), verts & !(1 << v))? {
                    return Ok(true);
                }
            }
        }
        self.failed.insert((faces, edges, verts));
        Ok(false)
    }
}

/// Whether some sequence of elementary collapses reduces `y` to a point.
pub fn collapsible(y: &TwoComplex, p: &Presentation) -> Result<bool, OracleError> {
    collapsible_with_budget(y, p, COLLAPSE_BUDGET)
}

pub fn collapsible_with_budget(y: &TwoComplex, p: &Presentation, budget: usize) -> Result<bool, OracleError> {
    if y.euler_characteristic() != 1 {
        return Ok(false);
    }
    assert!(y.vertices <= 32 && y.edges.len() <= 32 && y.faces.len() <= 32, "complex too large");
    let face_edges = y
        .faces
        .iter()
        .map(|&f| y.face_path(p, f).map(|(_, e)| e).expect("faces close"))
        .collect();
    let mut search = CollapseSearch {
        face_edges,
        edges: y.edges.clone(),
        vertices: y.vertices,
        failed: HashSet::new(),
        budget,
    };
    let full = |n: usize| if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    search.run(full(y.faces.len()), full(y.edges.len()), full(y.vertices))
}

/// Canonical serialization: vertex count, sorted edges, and sorted faces
/// where each face is `(relator, smallest start among its rotations)`.
type CanonicalKey = (usize, Vec<Edge>, Vec<Face>);

/// Start vertices of rotations of the face that read the same relator: the
/// vertices at multiples of the relator's rotation period.
fn aligned_starts(y: &TwoComplex, p: &Presentation, f: Face) -> Vec<usize> {
    let (verts, _) = y.face_path(p, f).expect("faces close");
    let period = p.relators[f.relator].rotation_period().max(1);
    verts.into_iter().step_by(period).collect()
}

fn relabel(y: &TwoComplex, p: &Presentation, order: &[usize]) -> CanonicalKey {
    // order[new] = old
    let mut new_of = vec![0; y.vertices];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    let mut edges: Vec<Edge> = y
        .edges
        .iter()
        .map(|e| Edge { src: new_of[e.src], dst: new_of[e.dst], gen: e.gen })
        .collect();
    edges.sort_unstable();
    let mut faces: Vec<Face> = y
        .faces
        .iter()
        .map(|&f| {
            let start = aligned_starts(y, p, f).into_iter().map(|v| new_of[v]).min().expect("nonempty");
            Face { relator: f.relator, start }
        })
        .collect();
    faces.sort_unstable();
    (y.vertices, edges, faces)
}

/// BFS order from `root`, exploring edge ends by `(gen, direction)`.
fn bfs_order(y: &TwoComplex, ends: &[Vec<(End, usize)>], root: usize) -> Vec<usize> {
    let mut seen = vec![false; y.vertices];
    let mut order = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut local = ends[v].clone();
        local.sort_unstable();
        for ((_, out), k) in local {
            let e = y.edges[k];
            let w = if out { e.dst } else { e.src };
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

/// Minimum relabelled serialization over all BFS roots. In a folded
/// connected graph the BFS from a root is unique, so this is a complete
/// isomorphism invariant.
pub fn canonical_form(y: &TwoComplex, p: &Presentation) -> CanonicalKey {
    let ends = y.ends();
    (0..y.vertices)
        .map(|root| relabel(y, p, &bfs_order(y, &ends, root)))
        .min()
        .expect("at least one vertex")
}

fn from_key(key: &CanonicalKey) -> TwoComplex {
    TwoComplex { vertices: key.0, edges: key.1.clone(), faces: Vec::new() }
}

/// All connected folded graphs with at most `max_edges` edges over `gens`
/// labels, one per isomorphism class, grouped by edge count.
pub fn folded_graphs(p: &Presentation, max_edges: usize) -> Vec<TwoComplex> {
    let gens = p.num_generators();
    let mut layer: BTreeSet<CanonicalKey> = BTreeSet::from([canonical_form(&TwoComplex::point(), p)]);
    let mut out: Vec<TwoComplex> = layer.iter().map(from_key).collect();
    for _ in 0..max_edges {
        let mut next = BTreeSet::new();
        for key in &layer {
            let g = from_key(key);
            let ends = g.ends();
            let free = |v: usize, end: End| !ends[v].iter().any(|(x, _)| *x == end);
            for u in 0..g.vertices {
                for gen in 0..gens {
                    if !free(u, (gen, true)) {
                        continue;
                    }
                    // u --gen--> v, v existing or new
                    for v in 0..=g.vertices {
                        if v < g.vertices && !free(v, (gen, false)) {
                            continue;
                        }
                        let mut h = g.clone();
                        if v == g.vertices {
                            h.vertices += 1;
                        }
                        h.edges.push(Edge { src: u, dst: v, gen });
                        next.insert(canonical_form(&h, p));
                    }
                }
                for gen in 0..gens {
                    // new vertex --gen--> u
                    if free(u, (gen, false)) {
                        let mut h = g.clone();
                        h.vertices += 1;
                        h.edges.push(Edge { src: g.vertices, dst: u, gen });
                        next.insert(canonical_form(&h, p));
                    }
                }
            }
        }
        out.extend(next.iter().map(from_key));
        layer = next;
    }
    out
}

/// Face slots of a graph: each closing reading of a relator, grouped with
/// its rotations. A slot can hold as many faces as it has distinct aligned
/// start vertices.
fn face_slots(g: &TwoComplex, p: &Presentation) -> Vec<(usize, Vec<usize>)> {
    let mut slots: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for relator in 0..p.num_relators() {
        if p.relators[relator].is_empty() {
            continue;
        }
        for start in 0..g.vertices {
            let f = Face { relator, start };
            if g.face_path(p, f).is_some() {
                let mut starts = aligned_starts(g, p, f);
                starts.sort_unstable();
                starts.dedup();
                slots.insert((relator, starts));
            }
        }
    }
    slots.into_iter().collect()
}

fn choose_faces(
    slots: &[(usize, Vec<usize>)],
    idx: usize,
    left: usize,
    acc: &mut Vec<Face>,
    out: &mut Vec<Vec<Face>>,
) {
    if idx == slots.len() {
        out.push(acc.clone());
        return;
    }
    let (relator, starts) = &slots[idx];
    let max = starts.len().min(left);
    for c in 0..=max {
        let before = acc.len();
        acc.extend(starts[..c].iter().map(|&start| Face { relator: *relator, start }));
        choose_faces(slots, idx + 1, left - c, acc, out);
        acc.truncate(before);
    }
}

/// Every connected, folded, link-injective complex with at most `max_edges`
/// edges and `max_faces` faces, one per isomorphism class, in a fixed order.
pub fn enumerate_immersions(p: &Presentation, max_edges: usize, max_faces: usize) -> Result<Vec<TwoComplex>, OracleError> {
    if max_edges > MAX_EDGES || max_faces > MAX_FACES {
        return Err(OracleError::BoundsTooLarge { edges: max_edges, faces: max_faces });
    }
    let mut out = Vec::new();
    for g in folded_graphs(p, max_edges) {
        let slots = face_slots(&g, p);
        let mut choices = Vec::new();
        choose_faces(&slots, 0, max_faces, &mut Vec::new(), &mut choices);
        let mut seen = BTreeMap::new();
        for faces in choices {
            let y = TwoComplex { faces, ..g.clone() };
            seen.entry(canonical_form(&y, p)).or_insert(y);
        }
        for (_, y) in seen {
            debug_assert!(is_folded(&y) && link_injective(&y, p) && y.is_connected());
            out.push(y);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    NegOrZeroChi,
    Collapsible,
    Candidate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImmersionReport {
    pub complex: TwoComplex,
    pub chi: i64,
    pub classification: Classification,
    /// Set when the collapse search ran out of budget.
    pub note: Option<String>,
}

pub fn classify(y: &TwoComplex, p: &Presentation) -> ImmersionReport {
    let chi = y.euler_characteristic();
    let (classification, note) = if chi <= 0 {
        (Classification::NegOrZeroChi, None)
    } else {
        match collapsible(y, p) {
            Ok(true) => (Classification::Collapsible, None),
            Ok(false) => (Classification::Candidate, None),
            Err(e) => (Classification::Candidate, Some(e.to_string())),
        }
    };
    ImmersionReport { complex: y.clone(), chi, classification, note }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub max_edges: usize,
    pub max_faces: usize,
    pub enumerated: usize,
    pub candidates: Vec<ImmersionReport>,
}

/// Complexes with `χ ≥ 1` that are not shown collapsible. An empty list
/// means the dichotomy held on every enumerated immersion; a candidate is
/// evidence to inspect, not a refutation.
pub fn npi_scan(p: &Presentation, max_edges: usize, max_faces: usize) -> Result<ScanResult, OracleError> {
    let all = enumerate_immersions(p, max_edges, max_faces)?;
    let candidates = all
        .iter()
        .map(|y| classify(y, p))
        .filter(|r| r.classification == Classification::Candidate)
        .collect();
    Ok(ScanResult { max_edges, max_faces, enumerated: all.len(), candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Word;

    fn pres(names: &[&str], rels: &[&[i64]]) -> Presentation {
        Presentation::from_names(names, rels.iter().map(|r| Word::from_signed(r)).collect())
    }

    fn edge(src: usize, dst: usize, gen: usize) -> Edge {
        Edge { src, dst, gen }
    }

    #[test]
    fn folding() {
        let loop1 = TwoComplex { vertices: 1, edges: vec![edge(0, 0, 0)], faces: vec![] };
        assert!(is_folded(&loop1));
        let loop2 = TwoComplex { vertices: 1, edges: vec![edge(0, 0, 0), edge(0, 0, 0)], faces: vec![] };
        assert!(!is_folded(&loop2));
        let par = TwoComplex { vertices: 2, edges: vec![edge(0, 1, 0), edge(0, 1, 0)], faces: vec![] };
        assert!(!is_folded(&par));
    }

    #[test]
    fn injectivity_and_chi() {
        let p = pres(&["a"], &[&[1, 1]]);
        let k = TwoComplex { vertices: 1, edges: vec![edge(0, 0, 0)], faces: vec![Face { relator: 0, start: 0 }] };
        assert!(link_injective(&k, &p));
        assert_eq!(k.euler_characteristic(), 1);
        let doubled = TwoComplex { faces: vec![k.faces[0], k.faces[0]], ..k.clone() };
        assert!(!link_injective(&doubled, &p));
        // the sphere double covering the projective plane
        let s2 = TwoComplex {
            vertices: 2,
            edges: vec![edge(0, 1, 0), edge(1, 0, 0)],
            faces: vec![Face { relator: 0, start: 0 }, Face { relator: 0, start: 1 }],
        };
        assert!(link_injective(&s2, &p));
        assert_eq!(s2.euler_characteristic(), 2);
        let circle = TwoComplex { vertices: 1, edges: vec![edge(0, 0, 0)], faces: vec![] };
        assert_eq!(circle.euler_characteristic(), 0);
        assert_eq!(TwoComplex::point().euler_characteristic(), 1);
    }

    #[test]
    fn collapsing() {
        // a disk: two edges a, b between two vertices with face a b^-1
        let p = pres(&["a", "b"], &[&[1, -2]]);
        let disk = TwoComplex {
            vertices: 2,
            edges: vec![edge(0, 1, 0), edge(0, 1, 1)],
            faces: vec![Face { relator: 0, start: 0 }],
        };
        assert!(collapsible(&disk, &p).unwrap());
        let rp2 = pres(&["a"], &[&[1, 1]]);
        let k = TwoComplex { vertices: 1, edges: vec![edge(0, 0, 0)], faces: vec![Face { relator: 0, start: 0 }] };
        assert!(!collapsible(&k, &rp2).unwrap());
        let tree = TwoComplex { vertices: 3, edges: vec![edge(0, 1, 0), edge(2, 1, 1)], faces: vec![] };
        assert!(collapsible(&tree, &p).unwrap());
    }

    #[test]
    fn free_group_graph_count() {
        let p = pres(&["a"], &[]);
        let all = enumerate_immersions(&p, 2, 0).unwrap();
        assert_eq!(all.len(), 5);
        assert!(npi_scan(&p, 3, 0).unwrap().candidates.is_empty());
    }

    #[test]
    fn projective_plane_candidate() {
        let p = pres(&["a"], &[&[1, 1]]);
        let scan = npi_scan(&p, 1, 1).unwrap();
        assert_eq!(scan.candidates.len(), 1);
        let c = &scan.candidates[0];
        assert_eq!(c.chi, 1);
        assert_eq!(c.complex.edges.len(), 1);
        assert_eq!(c.complex.faces.len(), 1);
        // the sphere needs two edges and two faces
        let scan = npi_scan(&p, 2, 2).unwrap();
        assert!(scan.candidates.iter().any(|c| c.chi == 2));
    }

    #[test]
    fn bounds_enforced() {
        let p = pres(&["a"], &[]);
        assert!(enumerate_immersions(&p, 11, 0).is_err());
        assert!(enumerate_immersions(&p, 1, 6).is_err());
    }
}
