//! Brute-force immersion counting: every labelled edge set on every vertex
//! count, deduplicated by trying all vertex permutations.

use std::collections::BTreeSet;

use npi_core::presentation::{Presentation, Word};

type E = (usize, usize, usize);

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(v: usize, edges: &[E]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(s, d, _) in edges {
            for (a, b) in [(s, d), (d, s)] {
                if a == x && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    seen.into_iter().all(|x| x)
}

fn folded(edges: &[E]) -> bool {
    let out: BTreeSet<(usize, usize)> = edges.iter().map(|&(s, _, g)| (s, g)).collect();
    let inn: BTreeSet<(usize, usize)> = edges.iter().map(|&(_, d, g)| (d, g)).collect();
    out.len() == edges.len() && inn.len() == edges.len()
}

/// Vertices visited reading `r` from `start`, if the path exists.
fn walk(edges: &[E], r: &Word, start: usize) -> Option<Vec<usize>> {
    let mut at = start;
    let mut path = vec![at];
    for l in r.iter() {
        at = if l.inverse {
            edges.iter().find(|&&(_, d, g)| d == at && g == l.gen)?.0
        } else {
            edges.iter().find(|&&(s, _, g)| s == at && g == l.gen)?.1
        };
        path.push(at);
    }
    Some(path)
}

/// Faces are (relator, set of starts that trace the same cyclic path).
fn face_classes(p: &Presentation, v: usize, edges: &[E]) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for (ri, r) in p.relators.iter().enumerate() {
        let period = r.rotation_period();
        let mut done = BTreeSet::new();
        for start in 0..v {
            if done.contains(&start) {
                continue;
            }
            let Some(path) = walk(edges, r, start) else { continue };
            if path[r.len()] != start {
                continue;
            }
            let class: BTreeSet<usize> = (0..r.len() / period).map(|k| path[k * period]).collect();
            done.extend(class.iter().copied());
            out.push((ri, class.into_iter().collect()));
        }
    }
    out
}

/// Corners (vertex, relator, position) must be distinct.
fn link_injective(p: &Presentation, edges: &[E], faces: &[(usize, usize)]) -> bool {
    let mut corners = BTreeSet::new();
    for &(ri, start) in faces {
        let path = walk(edges, &p.relators[ri], start).unwrap();
        for (i, &x) in path[..path.len() - 1].iter().enumerate() {
            if !corners.insert((x, ri, i)) {
                return false;
            }
        }
    }
    true
}

fn key(v: usize, edges: &[E], faces: &[(usize, Vec<usize>)]) -> (usize, Vec<E>, Vec<(usize, usize)>) {
    perms(v)
        .into_iter()
        .map(|pi| {
            let mut e: Vec<E> = edges.iter().map(|&(s, d, g)| (pi[s], pi[d], g)).collect();
            e.sort();
            let mut f: Vec<(usize, usize)> =
                faces.iter().map(|(r, class)| (*r, class.iter().map(|&x| pi[x]).min().unwrap())).collect();
            f.sort();
            (v, e, f)
        })
        .min()
        .unwrap()
}

pub fn naive_count(p: &Presentation, max_e: usize, max_f: usize) -> usize {
    let gens = p.num_generators();
    let mut seen = BTreeSet::new();
    for v in 1..=max_e + 1 {
        let all: Vec<E> = (0..v).flat_map(|s| (0..v).flat_map(move |d| (0..gens).map(move |g| (s, d, g)))).collect();
        let mut chosen = Vec::new();
        subsets(&all, 0, max_e, &mut chosen, &mut |edges| {
            if !connected(v, edges) || !folded(edges) {
                return;
            }
            let classes = face_classes(p, v, edges);
            // one slot per (class, copy), copies limited by the class size
            let slots: Vec<(usize, usize)> =
                classes.iter().enumerate().flat_map(|(c, (_, s))| (0..s.len()).map(move |k| (c, k))).collect();
            for mask in 0u32..1 << slots.len() {
                if mask.count_ones() as usize > max_f {
                    continue;
                }
                let picked: Vec<(usize, usize)> =
                    (0..slots.len()).filter(|&i| mask >> i & 1 == 1).map(|i| slots[i]).collect();
                // copies of a class fill its slots in order
                if picked.iter().any(|&(c, k)| k > 0 && !picked.contains(&(c, k - 1))) {
                    continue;
                }
                let concrete: Vec<(usize, usize)> =
                    picked.iter().map(|&(c, k)| (classes[c].0, classes[c].1[k])).collect();
                if !link_injective(p, edges, &concrete) {
                    continue;
                }
                let faces: Vec<(usize, Vec<usize>)> = picked.iter().map(|&(c, _)| classes[c].clone()).collect();
                seen.insert(key(v, edges, &faces));
            }
        });
    }
    seen.len()
}

fn subsets(all: &[E], from: usize, left: usize, chosen: &mut Vec<E>, f: &mut impl FnMut(&[E])) {
    f(chosen);
    if left == 0 {
        return;
    }
    for i in from..all.len() {
        chosen.push(all[i]);
        subsets(all, i + 1, left - 1, chosen, f);
        chosen.pop();
    }
}

