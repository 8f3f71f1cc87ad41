//! Global minimum cut, computed two independent ways.
//!
//! The brute-force route enumerates every bipartition (fixing node 0 on one
//! side halves the count) and is the ground truth for small graphs; the
//! Stoer-Wagner route runs in O(n^3) and must agree with it — the pair is
//! kept as a dual-route check, not collapsed. Both require non-negative
//! weights and both return a witness side, canonicalized to the side
//! containing node 0, sorted ascending. When several cuts tie, the two
//! routes may return different (equally optimal) witnesses; only the value
//! is guaranteed to match.

use crate::graph::{upper_pairs, Graph};
use crate::scalar::Scalar;
use crate::{Error, Result};
use serde::Serialize;

/// Hard cap for the brute-force enumeration (2^15 bipartitions).
pub const BRUTE_FORCE_MAX_N: usize = 16;

/// A cut value together with one side achieving it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutValue {
    pub value: Scalar,
    /// The side of the cut containing node 0, sorted ascending.
    pub side: Vec<usize>,
}

fn check_preconditions(g: &Graph, op: &str) -> Result<()> {
    for (i, j) in upper_pairs(g.n()) {
        if g.w(i, j).is_negative() {
            return Err(Error::BadEdge {
                i,
                j,
                w: g.w(i, j).canonical_string(),
                reason: "min cut requires non-negative weights",
            });
        }
    }
    if g.n() < 2 {
        return Err(Error::invalid(format!("{op} needs n >= 2")));
    }
    Ok(())
}

/// Total weight crossing the bipartition `(side, complement)`.
pub fn cut_weight(g: &Graph, side: &[usize]) -> Scalar {
    let mut in_side = vec![false; g.n()];
    for &v in side {
        in_side[v] = true;
    }
    upper_pairs(g.n()).fold(Scalar::zero(g.kind()), |acc, (i, j)| {
        if in_side[i] != in_side[j] {
            &acc + g.w(i, j)
        } else {
            acc
        }
    })
}

/// Exhaustive minimum cut over all `2^(n-1) - 1` bipartitions. The witness
/// is the first optimal side in mask order (node 0 always in the side).
pub fn min_cut_bruteforce(g: &Graph) -> Result<CutValue> {
    check_preconditions(g, "brute-force min cut")?;
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::invalid(format!(
            "brute-force min cut capped at n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let mut best: Option<CutValue> = None;
    // Masks over nodes 1..n; node 0 is implicitly in the side. The full
    // mask would put every node on one side, so it is excluded.
    let full = (1u32 << (n - 1)) - 1;
    for mask in 0..full {
        let side: Vec<usize> = std::iter::once(0)
            .chain((1..n).filter(|&v| mask & (1 << (v - 1)) != 0))
            .collect();
        let value = cut_weight(g, &side);
        if best.as_ref().map_or(true, |b| value < b.value) {
            best = Some(CutValue { value, side });
        }
    }
    Ok(best.expect("n >= 2 guarantees at least one bipartition"))
}

/// Stoer-Wagner minimum cut. Deterministic: each phase starts from the
/// lowest-numbered live supernode and breaks connectivity ties toward the
/// lowest node index.
pub fn min_cut_stoer_wagner(g: &Graph) -> Result<CutValue> {
    check_preconditions(g, "stoer-wagner min cut")?;
    let n = g.n();
    // Working weight matrix over supernodes; members[v] tracks which
    // original nodes have been merged into v.
    let mut w: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| g.w(i, j).clone()).collect())
        .collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut live: Vec<usize> = (0..n).collect();
    let mut best: Option<CutValue> = None;

    while live.len() > 1 {
        // One maximum-adjacency phase.
        let mut in_a = vec![false; n];
        let mut conn: Vec<Scalar> = vec![Scalar::zero(g.kind()); n];
        let start = live[0];
        in_a[start] = true;
        for &v in &live {
            if v != start {
                conn[v] = w[start][v].clone();
            }
        }
        let mut order = vec![start];
        while order.len() < live.len() {
            let mut pick: Option<usize> = None;
            for &v in &live {
                if !in_a[v] && pick.map_or(true, |p| conn[v] > conn[p]) {
                    pick = Some(v);
                }
            }
            let t = pick.expect("some live node is outside A");
            in_a[t] = true;
            order.push(t);
            for &v in &live {
                if !in_a[v] {
                    conn[v] = &conn[v] + &w[t][v];
                }
            }
        }
        let t = *order.last().expect("phase visits every live node");
        let s = order[order.len() - 2];
        // Cut of the phase: members[t] versus everything else.
        let value = conn[t].clone();
        let side = canonical_side(n, &members[t]);
        if best.as_ref().map_or(true, |b| value < b.value) {
            best = Some(CutValue { value, side });
        }
        // Merge t into s.
        let t_members = std::mem::take(&mut members[t]);
        members[s].extend(t_members);
        for &v in &live {
            if v != s && v != t {
                w[s][v] = &w[s][v] + &w[t][v];
                w[v][s] = w[s][v].clone();
            }
        }
        live.retain(|&v| v != t);
    }
    Ok(best.expect("n >= 2 runs at least one phase"))
}

/// Canonicalize a witness side: take the side containing node 0, sorted.
fn canonical_side(n: usize, side: &[usize]) -> Vec<usize> {
    let mut in_side = vec![false; n];
    for &v in side {
        in_side[v] = true;
    }
    let keep = in_side[0];
    let mut out: Vec<usize> = (0..n).filter(|&v| in_side[v] == keep).collect();
    out.sort_unstable();
    out
}
