//! Shared test-side oracles, deliberately written with different
//! algorithms than the library routines they cross-check.

#![allow(dead_code)]

use permcompat::paths::EdgeSemantics;
use permcompat::scalar::Scalar;
use permcompat::Graph;

/// Shortest-path distances from `source` by exhaustive enumeration of all
/// simple paths. Exponential — intended for `n <= 8` cross-checks against
/// the relaxation-based routine. Mirrors the semantics argument: a weight
/// counts as an edge according to `sem`, and unreachable nodes get the
/// resolved sentinel.
pub fn exhaustive_shortest_paths(g: &Graph, source: usize, sem: &EdgeSemantics) -> Vec<Scalar> {
    let n = g.n();
    assert!(source < n, "source out of range");
    let is_edge = |w: &Scalar| sem.zero_is_edge || !w.is_zero();
    let mut best: Vec<Option<Scalar>> = vec![None; n];
    best[source] = Some(Scalar::zero(g.kind()));
    let mut visited = vec![false; n];
    visited[source] = true;

    fn walk(
        g: &Graph,
        at: usize,
        dist: &Scalar,
        visited: &mut Vec<bool>,
        best: &mut Vec<Option<Scalar>>,
        is_edge: &dyn Fn(&Scalar) -> bool,
    ) {
        for next in 0..g.n() {
            if visited[next] || !is_edge(g.w(at, next)) {
                continue;
            }
            let nd = dist + g.w(at, next);
            let better = match &best[next] {
                None => true,
                Some(b) => &nd < b,
            };
            if better {
                best[next] = Some(nd.clone());
            }
            visited[next] = true;
            walk(g, next, &nd, visited, best, is_edge);
            visited[next] = false;
        }
    }

    let zero = Scalar::zero(g.kind());
    walk(g, source, &zero, &mut visited, &mut best, &is_edge);
    let sentinel = sem.resolve_sentinel(g);
    best.into_iter()
        .map(|b| b.unwrap_or_else(|| sentinel.clone()))
        .collect()
}
