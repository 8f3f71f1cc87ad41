//! Single-source shortest paths with explicit non-edge semantics.
//!
//! The graph type stores a full weight matrix, so "no edge" must be encoded
//! as a value. [`EdgeSemantics`] makes that encoding explicit: a sentinel
//! weight that marks non-edges (defaulting to `1 + sum |w|`, which exceeds
//! every achievable path length and therefore never collides with a real
//! distance), plus a choice of whether weight 0 is an edge of length zero
//! or a non-edge. Distances to unreachable nodes are reported as the
//! sentinel itself.
//!
//! The solver is Bellman-Ford over the present edges. Present edges must be
//! non-negative — with a sentinel for "unreachable" there is no sensible
//! answer on negative-weight instances, and the catalog functions never
//! produce them.

use crate::graph::{upper_pairs, Graph};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// How weight values map to edges.
#[derive(Debug, Clone)]
pub struct EdgeSemantics {
    /// The reserved "no edge here" value; `None` derives `1 + sum |w|`.
    pub sentinel: Option<Scalar>,
    /// Whether weight 0 is a real edge of length 0 (`true`) or a non-edge
    /// (`false`). The catalog's distance function uses `false`, matching
    /// 0/1 adjacency matrices.
    pub zero_is_edge: bool,
}

impl EdgeSemantics {
    /// The catalog convention: derived sentinel, zero means "no edge".
    pub fn zoo_default() -> Self {
        EdgeSemantics {
            sentinel: None,
            zero_is_edge: false,
        }
    }

    /// The sentinel value in force for a given graph.
    pub fn resolve_sentinel(&self, g: &Graph) -> Scalar {
        match &self.sentinel {
            Some(s) => s.clone(),
            None => &Scalar::one(g.kind()) + &g.total_abs_weight(),
        }
    }

    /// Whether the pair `{i, j}` is an edge under these semantics, given
    /// the resolved sentinel.
    fn is_edge(&self, w: &Scalar, sentinel: &Scalar) -> bool {
        if w == sentinel {
            return false;
        }
        self.zero_is_edge || !w.is_zero()
    }
}

/// Distances from `source` to every node; unreachable nodes get the
/// sentinel value. Errors on a negative present edge.
pub fn shortest_paths_from(g: &Graph, source: usize, sem: &EdgeSemantics) -> Result<Vec<Scalar>> {
    if source >= g.n() {
        return Err(Error::invalid(format!(
            "source {source} out of range for n={}",
            g.n()
        )));
    }
    let sentinel = sem.resolve_sentinel(g);
    let mut edges: Vec<(usize, usize, Scalar)> = Vec::new();
    for (i, j) in upper_pairs(g.n()) {
        let w = g.w(i, j);
        if sem.is_edge(w, &sentinel) {
            if w.is_negative() {
                return Err(Error::BadEdge {
                    i,
                    j,
                    w: w.canonical_string(),
                    reason: "negative edge weight in shortest-path computation",
                });
            }
            edges.push((i, j, w.clone()));
        }
    }

    let mut dist: Vec<Option<Scalar>> = vec![None; g.n()];
    dist[source] = Some(Scalar::zero(g.kind()));
    // n-1 relaxation rounds; all weights non-negative, so this converges.
    for _ in 1..g.n() {
        let mut changed = false;
        for (i, j, w) in &edges {
            for (a, b) in [(*i, *j), (*j, *i)] {
                if let Some(da) = dist[a].clone() {
                    let cand = &da + w;
                    let better = match &dist[b] {
                        None => true,
                        Some(db) => cand < *db,
                    };
                    if better {
                        dist[b] = Some(cand);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(dist
        .into_iter()
        .map(|d| d.unwrap_or_else(|| sentinel.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarKind;

    fn int(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn graph_from_upper(n: usize, upper: Vec<i64>) -> Graph {
        Graph::from_upper(
            n,
            0,
            ScalarKind::Rational,
            upper.into_iter().map(int).collect(),
            vec![vec![]; n],
        )
        .unwrap()
    }

    #[test]
    fn unit_five_cycle_distances() {
        // Ring 0-1-2-3-4-0 with unit weights: distances from node 0 are
        // 0, 1, 2, 2, 1.
        let mut upper = vec![0i64; 10];
        for (k, (i, j)) in upper_pairs(5).enumerate() {
            if j - i == 1 || (i == 0 && j == 4) {
                upper[k] = 1;
            }
        }
        let g = graph_from_upper(5, upper);
        let d = shortest_paths_from(&g, 0, &EdgeSemantics::zoo_default()).unwrap();
        assert_eq!(d, vec![int(0), int(1), int(2), int(2), int(1)]);
    }

    #[test]
    fn unreachable_nodes_get_the_sentinel() {
        // 0—1 edge of weight 2, node 2 isolated. Sentinel = 1 + 2 = 3.
        let g = graph_from_upper(3, vec![2, 0, 0]);
        let d = shortest_paths_from(&g, 0, &EdgeSemantics::zoo_default()).unwrap();
        assert_eq!(d, vec![int(0), int(2), int(3)]);
    }

    #[test]
    fn zero_weight_edges_are_respected_when_enabled() {
        let g = graph_from_upper(3, vec![0, 0, 5]);
        let sem = EdgeSemantics {
            sentinel: Some(int(100)),
            zero_is_edge: true,
        };
        let d = shortest_paths_from(&g, 0, &sem).unwrap();
        // 0—1 and 0—2 are zero-length edges; 1—2 weighs 5.
        assert_eq!(d, vec![int(0), int(0), int(0)]);
    }

    #[test]
    fn explicit_sentinel_marks_non_edges() {
        // Weight 7 declared to be the sentinel: the 0—1 "edge" vanishes.
        let g = graph_from_upper(3, vec![7, 1, 1]);
        let sem = EdgeSemantics {
            sentinel: Some(int(7)),
            zero_is_edge: false,
        };
        let d = shortest_paths_from(&g, 0, &sem).unwrap();
        assert_eq!(d, vec![int(0), int(2), int(1)]);
    }

    #[test]
    fn shorter_detours_beat_direct_edges() {
        // Direct 0—2 weighs 10; 0—1—2 weighs 1 + 2 = 3.
        let g = graph_from_upper(3, vec![1, 10, 2]);
        let d = shortest_paths_from(&g, 0, &EdgeSemantics::zoo_default()).unwrap();
        assert_eq!(d, vec![int(0), int(1), int(3)]);
    }

    #[test]
    fn negative_present_edges_are_rejected() {
        let g = graph_from_upper(3, vec![-1, 1, 1]);
        assert!(matches!(
            shortest_paths_from(&g, 0, &EdgeSemantics::zoo_default()),
            Err(Error::BadEdge { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn exact_fractional_weights_stay_exact() {
        let g = Graph::from_upper(
            3,
            0,
            ScalarKind::Rational,
            vec![Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::ratio(1, 7)],
            vec![vec![]; 3],
        )
        .unwrap();
        let d = shortest_paths_from(&g, 0, &EdgeSemantics::zoo_default()).unwrap();
        // 0→2 direct = 1/2 vs 0→1→2 = 1/3 + 1/7 = 10/21 < 1/2.
        assert_eq!(d[2], Scalar::ratio(10, 21));
    }
}
