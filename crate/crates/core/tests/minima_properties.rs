use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use npi_core::minima::{
    maxima_multiset, minima_multiset, replay_certificate, weak_concatenability, Concatenability, CopyCount, MinimaMultiset,
    Mode,
};
use npi_core::orders::{Assignment, IntTarget};
use npi_core::presentation::{Letter, Word};

/// Relators with every exponent sum zero, so any weighting kills them.
fn balanced_word(gens: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>(), any::<u32>()), 1..7).prop_map(|half| {
        let mut letters: Vec<Letter> =
            half.iter().map(|&(g, inv, _)| if inv { Letter::neg(g) } else { Letter::pos(g) }).collect();
        let mut back: Vec<(u32, Letter)> = half.iter().zip(&letters).map(|(&(_, _, key), &l)| (key, l.inv())).collect();
        back.sort_by_key(|&(k, _)| k);
        letters.extend(back.into_iter().map(|(_, l)| l));
        Word::new(letters).cyclically_reduce().0
    })
}

fn weights(gens: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..4, gens)
}

fn multisets() -> impl Strategy<Value = Vec<MinimaMultiset<BigInt>>> {
    let counts = prop::collection::btree_map(0usize..5, (0u32..3, 0u32..3), 1..4);
    prop::collection::vec(counts, 1..=6).prop_map(|family| {
        family
            .into_iter()
            .enumerate()
            .map(|(relator, c)| MinimaMultiset {
                relator,
                extremal: BigInt::from(0),
                counts: c
                    .into_iter()
                    .filter(|&(_, (p, n))| p + n > 0)
                    .map(|(g, (p, n))| (g, CopyCount::new(p, n)))
                    .collect::<BTreeMap<_, _>>(),
                mode: Mode::Min,
            })
            .collect()
    })
}

fn support(m: &MinimaMultiset<BigInt>) -> Vec<usize> {
    m.counts.iter().filter(|(_, c)| c.total() > 0).map(|(&g, _)| g).collect()
}

/// Can relators be placed in exactly this order?
fn order_works(ms: &[MinimaMultiset<BigInt>], order: &[usize]) -> bool {
    let mut seen: Vec<usize> = Vec::new();
    for &i in order {
        let ok = ms[i].counts.iter().any(|(g, c)| c.total() > 0 && c.pos != c.neg && !seen.contains(g));
        if !ok {
            return false;
        }
        seen.extend(support(&ms[i]));
    }
    true
}

fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.clone();
        let x = rest.remove(i);
        for mut p in permutations(rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn placeable(ms: &[MinimaMultiset<BigInt>], subset: &[usize]) -> bool {
    permutations(subset.to_vec()).iter().any(|o| order_works(ms, o))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn dp_matches_brute_force(ms in multisets()) {
        let k = ms.len();
        let brute = placeable(&ms, &(0..k).collect::<Vec<_>>());
        match weak_concatenability(&ms).unwrap() {
            Concatenability::Concatenable(cert) => {
                prop_assert!(brute);
                prop_assert!(replay_certificate(&cert, &ms).is_ok());
                prop_assert!(order_works(&ms, &cert.ordering));
            }
            Concatenability::NotConcatenable(f) => {
                prop_assert!(!brute);
                prop_assert!(!f.maximal_placeable.is_empty());
                for s in &f.maximal_placeable {
                    prop_assert!(placeable(&ms, s));
                    for extra in (0..k).filter(|i| !s.contains(i)) {
                        let mut bigger = s.clone();
                        bigger.push(extra);
                        prop_assert!(!placeable(&ms, &bigger));
                    }
                }
            }
        }
    }

    #[test]
    fn concatenability_passes_to_subfamilies(ms in multisets(), drop in any::<prop::sample::Index>()) {
        if let Concatenability::Concatenable(_) = weak_concatenability(&ms).unwrap() {
            let mut sub = ms.clone();
            sub.remove(drop.index(ms.len()));
            if !sub.is_empty() {
                prop_assert!(weak_concatenability(&sub).unwrap().certificate().is_some());
            }
        }
    }

    #[test]
    fn minima_are_rotation_invariant(r in balanced_word(3), w in weights(3), k in any::<prop::sample::Index>()) {
        prop_assume!(!r.is_empty());
        let a = Assignment::from_weights(&w);
        let base = minima_multiset(&IntTarget, &a, 0, &r).unwrap();
        let rotated = minima_multiset(&IntTarget, &a, 0, &r.rotate(k.index(r.len()))).unwrap();
        prop_assert_eq!(base.counts, rotated.counts);
    }

    #[test]
    fn maxima_are_minima_of_the_inverted_alphabet(r in balanced_word(3), w in weights(3)) {
        prop_assume!(!r.is_empty());
        let a = Assignment::from_weights(&w);
        let flipped = Word::new(r.iter().map(Letter::inv).collect());
        let max = maxima_multiset(&IntTarget, &a, 0, &r).unwrap();
        let min = minima_multiset(&IntTarget, &a, 0, &flipped).unwrap();
        prop_assert_eq!(&max.extremal, &-min.extremal.clone());
        let swapped: BTreeMap<usize, CopyCount> =
            min.counts.iter().map(|(&g, c)| (g, CopyCount::new(c.neg, c.pos))).collect();
        prop_assert_eq!(max.counts, swapped);
    }

    #[test]
    fn multiset_size_bounded_by_twice_extremal_visits(r in balanced_word(3), w in weights(3)) {
        prop_assume!(!r.is_empty());
        let a = Assignment::from_weights(&w);
        let m = minima_multiset(&IntTarget, &a, 0, &r).unwrap();
        prop_assert!(m.total() >= 1);
        prop_assert!(m.total() as usize <= r.len());
    }
}
