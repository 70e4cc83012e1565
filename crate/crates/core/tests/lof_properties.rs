use npi_core::homology::is_generalized_wirtinger;
use npi_core::logs::{lof_npi_check, lof_random, Log, LogEdge, LofSpec};
use npi_core::minima::{check_presentation, ConcatVerdict, Mode};
use npi_core::orders::{Assignment, IntTarget};

fn concatenable(log: &Log, mode: Mode) -> bool {
    let p = log.to_presentation();
    let ones = Assignment::from_weights(&vec![1; p.num_generators()]);
    matches!(check_presentation(&p, &IntTarget, &ones, mode).unwrap().verdict, ConcatVerdict::Concatenable(_))
}

fn sample(seed: u64) -> Log {
    let spec = LofSpec { vertices: 3 + (seed % 6) as usize, forest: seed.is_multiple_of(2) };
    lof_random(spec, seed).unwrap()
}

#[test]
fn forest_graphs_give_concatenability() {
    let (mut i_forests, mut t_forests) = (0, 0);
    for seed in 0..600 {
        let log = sample(seed);
        if log.edges.is_empty() {
            continue;
        }
        if log.graph_i().is_forest() {
            i_forests += 1;
            assert!(concatenable(&log, Mode::Min), "seed {seed}: I-forest but minima not concatenable");
        }
        if log.graph_t().is_forest() {
            t_forests += 1;
            assert!(concatenable(&log, Mode::Max), "seed {seed}: T-forest but maxima not concatenable");
        }
    }
    assert!(i_forests > 100 && t_forests > 100, "{i_forests} {t_forests}");
}

#[test]
fn samples_are_reduced_forests_with_free_abelianization() {
    for seed in 0..200 {
        let log = sample(seed);
        assert!(log.is_reduced(), "seed {seed}");
        assert!(log.underlying().is_forest(), "seed {seed}");
        let w = is_generalized_wirtinger(&log.to_presentation());
        assert!(w.holds, "seed {seed}: {}", w.reason);
        let either = log.graph_i().is_forest() || log.graph_t().is_forest();
        assert_eq!(lof_npi_check(&log).unwrap().verdict.is_certified(), either, "seed {seed}");
    }
}

#[test]
fn samples_are_reproducible() {
    for seed in [0, 1, 99] {
        assert_eq!(sample(seed), sample(seed));
    }
    assert_ne!(sample(2), sample(8));
}

#[test]
fn golden_sample() {
    let log = lof_random(LofSpec { vertices: 5, forest: false }, 7).unwrap();
    let edges: Vec<(usize, usize, usize)> = log.edges.iter().map(|&LogEdge { i, lambda, t }| (i, lambda, t)).collect();
    assert_eq!(log.vertices, ["a", "b", "c", "d", "e"]);
    assert_eq!(edges, GOLDEN);
}

const GOLDEN: [(usize, usize, usize); 4] = [(3, 2, 1), (2, 1, 3), (0, 2, 3), (4, 3, 0)];
