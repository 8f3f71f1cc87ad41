//! Cross-checks between independent algorithm routes: relaxation-based
//! shortest paths against exhaustive path enumeration, and the contraction
//! min-cut against the brute-force bipartition scan. The acceptance rig
//! runs larger sweeps; these stay quick enough for every test run.

mod common;

use permcompat::derive_seed;
use permcompat::gen::{generate, Family, FeatureInit, GenSpec};
use permcompat::graph::Graph;
use permcompat::mincut::{cut_weight, min_cut_bruteforce, min_cut_stoer_wagner};
use permcompat::paths::{shortest_paths_from, EdgeSemantics};
use permcompat::sampler::{sample_graphs, SampleConfig};
use permcompat::scalar::{Scalar, ScalarKind};

const SEED: u64 = 0x0A_C1E5;

fn nonneg_graphs(n: usize, seed: u64, count: usize) -> Vec<Graph> {
    // Sampled integer weights are already in 0..=10; keep the engineered
    // prefix (symmetric + near-symmetric instances) for edge-case coverage.
    sample_graphs(&SampleConfig::exact(n, 0, seed, count)).unwrap()
}

#[test]
fn shortest_paths_match_exhaustive_enumeration() {
    let sem = EdgeSemantics::zoo_default();
    for n in 3..=8 {
        let graphs = nonneg_graphs(n, derive_seed(SEED, &format!("sp-{n}")), 10);
        for g in &graphs {
            for source in [0, n - 1] {
                let fast = shortest_paths_from(g, source, &sem).unwrap();
                let slow = common::exhaustive_shortest_paths(g, source, &sem);
                assert_eq!(fast, slow, "n={n} source={source}");
            }
        }
    }
}

#[test]
fn shortest_paths_match_on_sparse_generated_graphs() {
    let sem = EdgeSemantics::zoo_default();
    // Low edge probability exercises the unreachable-node sentinel path.
    for k in 0..20 {
        let (g, _) = generate(&GenSpec {
            family: Family::Erg,
            n: 7,
            d: 0,
            p_edge: 0.25,
            features: FeatureInit::Identical,
            kind: ScalarKind::Rational,
            seed: derive_seed(SEED, &format!("sparse-{k}")),
        })
        .unwrap();
        let fast = shortest_paths_from(&g, 0, &sem).unwrap();
        let slow = common::exhaustive_shortest_paths(&g, 0, &sem);
        assert_eq!(fast, slow, "instance {k}");
    }
}

#[test]
fn min_cut_routes_agree_and_witnesses_replay() {
    for n in 4..=10 {
        let graphs = nonneg_graphs(n, derive_seed(SEED, &format!("mc-{n}")), 8);
        for g in &graphs {
            let brute = min_cut_bruteforce(g).unwrap();
            let sw = min_cut_stoer_wagner(g).unwrap();
            assert_eq!(brute.value, sw.value, "n={n}");
            assert_eq!(cut_weight(g, &brute.side), brute.value);
            assert_eq!(cut_weight(g, &sw.side), sw.value);
            assert!(brute.side.contains(&0) && sw.side.contains(&0));
        }
    }
}

#[test]
fn min_cut_zero_on_disconnected_graphs() {
    // p_edge = 0 gives the empty graph: the cut value must be exactly 0.
    let (g, _) = generate(&GenSpec {
        family: Family::Erg,
        n: 6,
        d: 0,
        p_edge: 0.0,
        features: FeatureInit::Identical,
        kind: ScalarKind::Rational,
        seed: derive_seed(SEED, "empty"),
    })
    .unwrap();
    assert_eq!(min_cut_bruteforce(&g).unwrap().value, Scalar::from_int(0));
    assert_eq!(min_cut_stoer_wagner(&g).unwrap().value, Scalar::from_int(0));
}

#[test]
fn fractional_weights_cross_check_exactly() {
    // Hand-built graph with fractional weights: both routes must agree to
    // the exact rational, not just numerically.
    let g = Graph::from_upper(
        4,
        0,
        ScalarKind::Rational,
        vec![
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 7),
            Scalar::from_int(0),
            Scalar::ratio(2, 5),
            Scalar::ratio(1, 2),
            Scalar::ratio(3, 11),
        ],
        vec![vec![], vec![], vec![], vec![]],
    )
    .unwrap();
    let brute = min_cut_bruteforce(&g).unwrap();
    let sw = min_cut_stoer_wagner(&g).unwrap();
    assert_eq!(brute.value, sw.value);
    let sem = EdgeSemantics::zoo_default();
    assert_eq!(
        shortest_paths_from(&g, 0, &sem).unwrap(),
        common::exhaustive_shortest_paths(&g, 0, &sem)
    );
}
