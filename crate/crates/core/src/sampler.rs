//! The shared graph sampler behind the compatibility checkers and CLI.
//!
//! A sample batch is deterministic in (n, d, kind, seed, count). When
//! engineered instances are enabled (the default), the batch *starts* with
//! them, in a fixed order:
//!
//! 1. the all-ones complete graph (maximally symmetric — at `n = 3` this is
//!    the unit triangle, the standard counterexample graph),
//! 2. a random graph whose first two nodes are forced to be twins (equal
//!    attachments, equal features),
//! 3. the same twin graph with one attachment nudged by `1/1000000` — close
//!    enough to symmetric to stress float tolerances, but genuinely
//!    asymmetric.
//!
//! Random graphs fill the rest: integer weights and features in `0..=10`
//! (as exact rationals or as floats, per the requested kind). Integer
//! weights keep every catalog function happy: non-negative for cuts and
//! paths, zeros giving sparse adjacency.

use crate::graph::{upper_pairs, Graph};
use crate::scalar::{Scalar, ScalarKind};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Batch parameters.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub n: usize,
    pub d: usize,
    pub kind: ScalarKind,
    pub seed: u64,
    pub count: usize,
    /// Put the engineered instances at the front of the batch.
    pub include_engineered: bool,
}

impl SampleConfig {
    pub fn exact(n: usize, d: usize, seed: u64, count: usize) -> Self {
        SampleConfig {
            n,
            d,
            kind: ScalarKind::Rational,
            seed,
            count,
            include_engineered: true,
        }
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, d: usize, kind: ScalarKind) -> Graph {
    let upper: Vec<Scalar> = upper_pairs(n)
        .map(|_| Scalar::int_of_kind(rng.gen_range(0..=10), kind))
        .collect();
    let x: Vec<Vec<Scalar>> = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| Scalar::int_of_kind(rng.gen_range(0..=10), kind))
                .collect()
        })
        .collect();
    Graph::from_upper(n, d, kind, upper, x).expect("sampler emits well-formed graphs")
}

/// Force nodes 0 and 1 of a graph into twin position: equal attachments to
/// every other node and equal features.
fn twinned(g: &Graph) -> Graph {
    let n = g.n();
    let mut w: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| g.w(i, j).clone()).collect())
        .collect();
    for k in 2..n {
        w[1][k] = w[0][k].clone();
        w[k][1] = w[0][k].clone();
    }
    let mut x: Vec<Vec<Scalar>> = (0..n).map(|i| g.x_row(i).to_vec()).collect();
    x[1] = x[0].clone();
    Graph::from_matrix(w, x).expect("twinning preserves well-formedness")
}

/// Deterministic batch of graphs. See the module docs for the layout.
pub fn sample_graphs(cfg: &SampleConfig) -> Result<Vec<Graph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);

    if cfg.include_engineered {
        out.push(Graph::unit_complete(cfg.n, cfg.d, cfg.kind)?);
        if out.len() < cfg.count {
            let twin = twinned(&random_graph(&mut rng, cfg.n, cfg.d, cfg.kind));
            out.push(twin.clone());
            if out.len() < cfg.count && cfg.n >= 3 {
                // Nudge one twin attachment: near-symmetric, not symmetric.
                let n = cfg.n;
                let eps = match cfg.kind {
                    ScalarKind::Rational => Scalar::ratio(1, 1_000_000),
                    ScalarKind::Float => Scalar::Float(1e-6),
                };
                let mut w: Vec<Vec<Scalar>> = (0..n)
                    .map(|i| (0..n).map(|j| twin.w(i, j).clone()).collect())
                    .collect();
                w[0][2] = &w[0][2] + &eps;
                w[2][0] = w[0][2].clone();
                let x: Vec<Vec<Scalar>> = (0..n).map(|i| twin.x_row(i).to_vec()).collect();
                out.push(Graph::from_matrix(w, x)?);
            }
        }
    }
    while out.len() < cfg.count {
        out.push(random_graph(&mut rng, cfg.n, cfg.d, cfg.kind));
    }
    out.truncate(cfg.count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn batches_are_deterministic() {
        let a = sample_graphs(&SampleConfig::exact(4, 2, 7, 10)).unwrap();
        let b = sample_graphs(&SampleConfig::exact(4, 2, 7, 10)).unwrap();
        assert_eq!(a, b);
        let c = sample_graphs(&SampleConfig::exact(4, 2, 8, 10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn engineered_prefix_has_the_documented_shapes() {
        let batch = sample_graphs(&SampleConfig::exact(3, 1, 5, 5)).unwrap();
        // First: unit complete graph.
        assert_eq!(batch[0], Graph::unit_complete(3, 1, ScalarKind::Rational).unwrap());
        // Second: nodes 0 and 1 are twins.
        let t = Permutation::transposition(3, 0, 1).unwrap();
        assert!(batch[1].is_automorphism(&t));
        // Third: the nudged graph is NOT symmetric under the twin swap.
        assert!(!batch[2].is_automorphism(&t));
        // Count honored exactly.
        assert_eq!(batch.len(), 5);
    }

    #[test]
    fn count_one_returns_just_the_unit_graph() {
        let batch = sample_graphs(&SampleConfig::exact(3, 0, 9, 1)).unwrap();
        assert_eq!(batch.len(), 1);
        assert_eq!(batch[0], Graph::unit_complete(3, 0, ScalarKind::Rational).unwrap());
    }

    #[test]
    fn float_batches_carry_floats() {
        let cfg = SampleConfig {
            kind: ScalarKind::Float,
            ..SampleConfig::exact(4, 1, 3, 6)
        };
        let batch = sample_graphs(&cfg).unwrap();
        assert!(batch.iter().all(|g| g.kind() == ScalarKind::Float));
    }

    #[test]
    fn random_fill_respects_weight_and_feature_ranges() {
        let batch = sample_graphs(&SampleConfig::exact(5, 2, 11, 20)).unwrap();
        for g in &batch {
            for (i, j) in upper_pairs(5) {
                let w = g.w(i, j).to_f64();
                assert!((0.0..=10.0 + 1e-6).contains(&w));
            }
        }
    }
}
