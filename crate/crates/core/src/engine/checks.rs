//! Behavioral checks on message-passing programs: equivariance under
//! relabeling, and the orbit argument that rules targets out.
//!
//! Every program run by this engine commutes with relabeling *except* where
//! a message function reads raw node indices; the equivariance checker
//! verifies the former and catches the latter. The orbit demo packages the
//! impossibility argument: program outputs are constant on automorphism
//! orbits, so any target assignment that separates nodes within an orbit
//! forces a minimum number of errors no program in the engine can avoid.

use crate::engine::{run_gnn, GnnProgram};
use crate::orbits::{node_orbits, orbits_from_automorphisms};
use crate::paths::{shortest_paths_from, EdgeSemantics};
use crate::perm::Permutation;
use crate::scalar::{Scalar, Tolerance};
use crate::{Error, Graph, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// One concrete equivariance violation.
#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceWitness {
    pub perm: Permutation,
    pub node: usize,
    /// Output at the relabeled position on the original graph.
    pub lhs: Vec<Scalar>,
    /// Output at the node on the relabeled graph.
    pub rhs: Vec<Scalar>,
}

/// Outcome of an equivariance check over a set of permutations.
#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceReport {
    pub perms_checked: usize,
    pub constraints_checked: u64,
    pub violations: u64,
    pub first_violation: Option<EquivarianceWitness>,
    pub passed: bool,
}

/// Check `output[perm(i)] on g  ==  output[i] on relabeled g` for every
/// given permutation and node.
pub fn check_equivariance(
    prog: &GnnProgram,
    g: &Graph,
    perms: &[Permutation],
    tol: &Tolerance,
) -> Result<EquivarianceReport> {
    let base = run_gnn(prog, g)?;
    let mut constraints = 0u64;
    let mut violations = 0u64;
    let mut first_violation = None;
    for p in perms {
        let relabeled = run_gnn(prog, &g.apply_iwfp(p)?)?;
        for i in 0..g.n() {
            constraints += 1;
            let lhs = &base[p.apply(i)];
            let rhs = &relabeled[i];
            if !tol.eq_vec(lhs, rhs) {
                violations += 1;
                if first_violation.is_none() {
                    first_violation = Some(EquivarianceWitness {
                        perm: p.clone(),
                        node: i,
                        lhs: lhs.clone(),
                        rhs: rhs.clone(),
                    });
                }
            }
        }
    }
    Ok(EquivarianceReport {
        perms_checked: perms.len(),
        constraints_checked: constraints,
        violations,
        first_violation,
        passed: violations == 0,
    })
}

/// The orbit impossibility argument, evaluated on one graph and one target.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitDemo {
    /// Orbit partition used (from full enumeration or supplied
    /// automorphisms — the latter may split true orbits, making the bound
    /// conservative).
    pub orbits: Vec<Vec<usize>>,
    /// Target value per node: shortest-path distance to `source`.
    pub targets: Vec<Scalar>,
    /// Program output per node (scalar).
    pub outputs: Vec<Scalar>,
    /// Whether outputs are constant within each orbit (must hold for any
    /// index-blind program).
    pub outputs_constant_on_orbits: bool,
    /// Minimum mismatches ANY orbit-constant assignment must make:
    /// `sum over orbits of (orbit size - max target multiplicity)`.
    pub forced_mismatches: usize,
    /// Mismatches this particular program makes.
    pub achieved_mismatches: usize,
    /// True iff some orbit-constant assignment could reach the target.
    pub target_reachable: bool,
}

/// Run the orbit argument with orbits from full automorphism enumeration
/// (inherits the permutation cap).
pub fn orbit_equality_demo(
    prog: &GnnProgram,
    g: &Graph,
    source: usize,
    tol: &Tolerance,
) -> Result<OrbitDemo> {
    let orbits = node_orbits(g)?;
    demo_with_orbits(prog, g, source, tol, orbits)
}

/// Run the orbit argument with caller-supplied automorphisms (each is
/// verified). Usable beyond the enumeration cap; the resulting partition
/// may be finer than the true orbits, which only weakens the bound.
pub fn orbit_equality_demo_with_autos(
    prog: &GnnProgram,
    g: &Graph,
    source: usize,
    tol: &Tolerance,
    autos: &[Permutation],
) -> Result<OrbitDemo> {
    for p in autos {
        if !g.is_automorphism(p) {
            return Err(Error::invalid(format!(
                "claimed automorphism {p} does not fix the graph"
            )));
        }
    }
    let orbits = orbits_from_automorphisms(g.n(), autos)?;
    demo_with_orbits(prog, g, source, tol, orbits)
}

fn demo_with_orbits(
    prog: &GnnProgram,
    g: &Graph,
    source: usize,
    tol: &Tolerance,
    orbits: Vec<Vec<usize>>,
) -> Result<OrbitDemo> {
    if prog.out_dim() != 1 {
        return Err(Error::invalid(
            "orbit demo needs a program with scalar output",
        ));
    }
    let targets = shortest_paths_from(g, source, &EdgeSemantics::zoo_default())?;
    let outputs: Vec<Scalar> = run_gnn(prog, g)?
        .into_iter()
        .map(|mut row| row.remove(0))
        .collect();

    let mut constant = true;
    for orbit in &orbits {
        for &v in &orbit[1..] {
            if !tol.eq(&outputs[v], &outputs[orbit[0]]) {
                constant = false;
            }
        }
    }

    // For each orbit, the best an orbit-constant assignment can do is
    // match the most common target value inside it.
    let mut forced = 0usize;
    for orbit in &orbits {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for &v in orbit {
            *counts.entry(targets[v].canonical_string()).or_insert(0) += 1;
        }
        let best = counts.values().copied().max().unwrap_or(0);
        forced += orbit.len() - best;
    }

    let achieved = (0..g.n())
        .filter(|&i| !tol.eq(&outputs[i], &targets[i]))
        .count();

    Ok(OrbitDemo {
        orbits,
        targets,
        outputs,
        outputs_constant_on_orbits: constant,
        forced_mismatches: forced,
        achieved_mismatches: achieved,
        target_reachable: forced == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{MessageFn, RandomProgramFamily};
    use crate::perm::enumerate_sn;
    use crate::scalar::ScalarKind;

    fn int(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn legitimate_programs_are_equivariant() {
        let g = Graph::from_upper(
            4,
            1,
            ScalarKind::Rational,
            vec![int(1), int(0), int(3), int(2), int(0), int(1)],
            vec![vec![int(1)], vec![int(4)], vec![int(2)], vec![int(2)]],
        )
        .unwrap();
        let perms = enumerate_sn(4).unwrap();
        for prog in [
            GnnProgram {
                d_in: 1,
                layers: vec![MessageFn::EdgeWeight, MessageFn::WeightedNeighborState],
            },
            RandomProgramFamily::default_shape(1).sample(3),
        ] {
            let rep = check_equivariance(&prog, &g, &perms, &Tolerance::Exact).unwrap();
            assert!(rep.passed, "violations: {:?}", rep.first_violation);
            assert_eq!(rep.constraints_checked, 24 * 4);
        }
    }

    #[test]
    fn index_leak_is_caught() {
        let g = Graph::unit_complete(3, 1, ScalarKind::Rational).unwrap();
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![MessageFn::IndexLeak],
        };
        let perms = enumerate_sn(3).unwrap();
        let rep = check_equivariance(&prog, &g, &perms, &Tolerance::Exact).unwrap();
        assert!(!rep.passed);
        assert!(rep.first_violation.is_some());
    }

    #[test]
    fn fully_symmetric_graph_forces_mismatches() {
        // Unit triangle: one orbit, targets (0, 1, 1) -> even the best
        // orbit-constant assignment misses one node.
        let g = Graph::unit_complete(3, 1, ScalarKind::Rational).unwrap();
        let prog = RandomProgramFamily::default_shape(1).sample(1);
        let demo = orbit_equality_demo(&prog, &g, 0, &Tolerance::Exact).unwrap();
        assert_eq!(demo.orbits, vec![vec![0, 1, 2]]);
        assert_eq!(demo.targets, vec![int(0), int(1), int(1)]);
        assert!(demo.outputs_constant_on_orbits);
        assert_eq!(demo.forced_mismatches, 1);
        assert!(!demo.target_reachable);
        assert!(demo.achieved_mismatches >= demo.forced_mismatches);
    }

    #[test]
    fn asymmetric_graph_leaves_targets_reachable_in_principle() {
        // Path with distinct features: trivial orbits, nothing forced.
        let g = Graph::from_upper(
            3,
            1,
            ScalarKind::Rational,
            vec![int(1), int(0), int(2)],
            vec![vec![int(1)], vec![int(2)], vec![int(3)]],
        )
        .unwrap();
        let prog = RandomProgramFamily::default_shape(1).sample(2);
        let demo = orbit_equality_demo(&prog, &g, 0, &Tolerance::Exact).unwrap();
        assert_eq!(demo.forced_mismatches, 0);
        assert!(demo.target_reachable);
    }

    #[test]
    fn supplied_automorphisms_are_verified() {
        let g = Graph::from_upper(
            3,
            1,
            ScalarKind::Rational,
            vec![int(1), int(0), int(2)],
            vec![vec![int(1)], vec![int(2)], vec![int(3)]],
        )
        .unwrap();
        let prog = RandomProgramFamily::default_shape(1).sample(2);
        let fake = Permutation::transposition(3, 0, 1).unwrap();
        assert!(orbit_equality_demo_with_autos(
            &prog,
            &g,
            0,
            &Tolerance::Exact,
            &[fake]
        )
        .is_err());
    }
}
