//! Automorphisms and node orbits by exhaustive search.
//!
//! An automorphism is a relabeling that maps the graph onto itself (weights
//! and features both). Two nodes are in the same orbit when some
//! automorphism sends one to the other; a function that commutes with
//! relabeling must take the same value on every node of an orbit, which is
//! what makes orbits the right unit for impossibility arguments.

use crate::graph::Graph;
use crate::perm::{enumerate_sn_with_cap, Permutation, DEFAULT_PERM_CAP};
use crate::Result;

/// All automorphisms of `g`, found by filtering `n!` candidates. Inherits
/// the permutation cap.
pub fn automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    automorphisms_with_cap(g, DEFAULT_PERM_CAP)
}

/// [`automorphisms`] with an explicit enumeration cap.
pub fn automorphisms_with_cap(g: &Graph, cap: usize) -> Result<Vec<Permutation>> {
    Ok(enumerate_sn_with_cap(g.n(), cap)?
        .into_iter()
        .filter(|p| g.is_automorphism(p))
        .collect())
}

/// The orbit partition of the nodes of `g`: blocks sorted by their smallest
/// element, each block sorted ascending.
pub fn node_orbits(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let autos = automorphisms(g)?;
    orbits_from_automorphisms(g.n(), &autos)
}

/// Orbit partition induced by an explicit list of automorphisms.
pub fn orbits_from_automorphisms(n: usize, autos: &[Permutation]) -> Result<Vec<Vec<usize>>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for p in autos {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, p.apply(i)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        blocks[r].push(i);
    }
    Ok(blocks.into_iter().filter(|b| !b.is_empty()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Scalar, ScalarKind};

    fn int(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn complete_unit_graph_has_full_symmetry() {
        let g = Graph::unit_complete(4, 1, ScalarKind::Rational).unwrap();
        assert_eq!(automorphisms(&g).unwrap().len(), 24);
        assert_eq!(node_orbits(&g).unwrap(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn path_graph_has_reflection_only() {
        // 0—1—2 with equal weights and equal features: only the reflection
        // swapping the endpoints survives.
        let g = Graph::from_upper(
            3,
            1,
            ScalarKind::Rational,
            vec![int(1), int(0), int(1)],
            vec![vec![int(5)], vec![int(5)], vec![int(5)]],
        )
        .unwrap();
        let autos = automorphisms(&g).unwrap();
        assert_eq!(autos.len(), 2);
        assert_eq!(node_orbits(&g).unwrap(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn distinct_features_break_symmetry() {
        let g = Graph::from_upper(
            3,
            1,
            ScalarKind::Rational,
            vec![int(1), int(1), int(1)],
            vec![vec![int(1)], vec![int(2)], vec![int(3)]],
        )
        .unwrap();
        assert_eq!(automorphisms(&g).unwrap().len(), 1);
        assert_eq!(node_orbits(&g).unwrap(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn five_cycle_orbit_is_transitive() {
        // Unit 5-cycle: dihedral group of order 10, one orbit.
        let mut upper = vec![int(0); 10];
        // pairs in row-major order for n=5
        let pairs: Vec<(usize, usize)> = crate::graph::upper_pairs(5).collect();
        for (k, (i, j)) in pairs.iter().enumerate() {
            if (j - i == 1) || (*i == 0 && *j == 4) {
                upper[k] = int(1);
            }
        }
        let g = Graph::from_upper(5, 1, ScalarKind::Rational, upper, vec![vec![int(1)]; 5])
            .unwrap();
        assert_eq!(automorphisms(&g).unwrap().len(), 10);
        assert_eq!(node_orbits(&g).unwrap(), vec![vec![0, 1, 2, 3, 4]]);
    }
}
