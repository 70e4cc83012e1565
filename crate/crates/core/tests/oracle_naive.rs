use std::collections::BTreeSet;

use npi_core::oracle::{enumerate_immersions, npi_scan, Classification};
use npi_core::presentation::{Presentation, Word};

mod support;
use support::naive_oracle::naive_count;

fn pres(names: &[&str], rels: &[&[i64]]) -> Presentation {
    Presentation::from_names(names, rels.iter().map(|r| Word::from_signed(r)).collect())
}

fn corpus() -> Vec<Presentation> {
    vec![
        pres(&["a"], &[&[1, 1]]),
        pres(&["a", "b"], &[&[1, 2, -1, -2]]),
        pres(&["a", "b"], &[&[1, 2, -1, -2, -2]]),
        pres(&["a", "b"], &[&[1, 2, 1, 2]]),
        pres(&["a", "b"], &[&[-1, 2]]),
        pres(&["a", "b"], &[&[1, 1, 2, 2, 2]]),
    ]
}

#[test]
fn enumeration_matches_naive_oracle() {
    for p in corpus() {
        for e in 0..=3 {
            for f in 0..=1 {
                let fast = enumerate_immersions(&p, e, f).unwrap().len();
                let slow = naive_count(&p, e, f);
                assert_eq!(fast, slow, "{:?} at ({e}, {f})", p.relators);
            }
        }
    }
}

#[test]
fn enumeration_has_no_duplicates() {
    for p in corpus() {
        let all = enumerate_immersions(&p, 3, 1).unwrap();
        let keys: BTreeSet<_> = all.iter().map(|y| npi_core::oracle::canonical_form(y, &p)).collect();
        assert_eq!(keys.len(), all.len());
    }
}

#[test]
fn projective_plane_has_one_candidate() {
    let p = pres(&["a"], &[&[1, 1]]);
    let scan = npi_scan(&p, 1, 1).unwrap();
    assert_eq!(scan.candidates.len(), 1);
    assert_eq!(scan.candidates[0].chi, 1);
    assert_eq!(scan.candidates[0].classification, Classification::Candidate);
}
