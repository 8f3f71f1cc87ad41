//! Checkers deciding whether a node function commutes with relabeling.
//!
//! The defining condition is a family of equations indexed by a
//! permutation `p` and a node `i`: the output at the relabeled position on
//! the original graph must equal the output at `i` on the relabeled graph
//! (`f[p(i)](g) == f[i](relabel(g, p))`). Each checker samples graphs and
//! tests some subset of those equations:
//!
//! - [`check_full`]: every permutation, every node — `n * n!` equations per
//!   graph. Ground truth, and the cost baseline.
//! - [`check_reduced`]: a pinned node `i0` and transpositions only —
//!   `n(n-1)/2` equations per graph, provably equivalent in verdict to the
//!   full check on the same graph set.
//! - [`check_feature_only`]: for functions declared weight-oblivious;
//!   validates the declaration by resampling weights, then checks the same
//!   equations (which, for such functions, only exercise the features).
//! - [`check_uniform_invariant`]: for functions declared constant across
//!   nodes; validates uniformity, then checks invariance of the single
//!   value — one node per permutation.
//! - [`necessary_falsifier`]: sampled stabilizer equations plus the
//!   node-moving transpositions; never certifies, but scales past the
//!   enumeration cap and finds witnesses fast.
//!
//! A *witness* is a fully replayable violated equation: graph,
//! permutation, node, and both sides. "Compatible" verdicts are always
//! relative to the sample; "incompatible" verdicts are definitive.

use crate::graph::Graph;
use crate::perm::{enumerate_sn, enumerate_stabilizer, Permutation, DEFAULT_PERM_CAP};
use crate::scalar::{Scalar, Tolerance};
use crate::zoo::GraphFunction;
use crate::{derive_seed, Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Verdict of a checker run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// No violated equation in the sampled set. Not a proof.
    CompatibleOnSample,
    /// A violated equation was found; see the witness. Definitive.
    Incompatible,
}

/// A violated equation, replayable from its parts.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub graph: Graph,
    pub perm: Permutation,
    pub node: usize,
    /// `f[perm(node)]` on the original graph.
    pub lhs: Vec<Scalar>,
    /// `f[node]` on the relabeled graph.
    pub rhs: Vec<Scalar>,
}

impl Witness {
    /// Re-evaluate the witness equation from scratch; true iff it still
    /// violates under the given tolerance.
    pub fn replay(&self, f: &GraphFunction, tol: &Tolerance) -> Result<bool> {
        let base = f.eval(&self.graph)?;
        let relabeled = f.eval(&self.graph.apply_iwfp(&self.perm)?)?;
        Ok(!tol.eq_vec(&base[self.perm.apply(self.node)], &relabeled[self.node]))
    }
}

/// Outcome of one checker run.
#[derive(Debug, Clone, Serialize)]
pub struct CompatReport {
    pub function: String,
    pub method: &'static str,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub graphs_checked: usize,
    pub constraints_checked: u64,
    pub tolerance: Tolerance,
}

impl CompatReport {
    fn new(function: &str, method: &'static str, tol: Tolerance) -> Self {
        CompatReport {
            function: function.to_string(),
            method,
            verdict: Verdict::CompatibleOnSample,
            witness: None,
            graphs_checked: 0,
            constraints_checked: 0,
            tolerance: tol,
        }
    }

    fn violate(&mut self, g: &Graph, p: &Permutation, node: usize, lhs: &[Scalar], rhs: &[Scalar]) {
        self.verdict = Verdict::Incompatible;
        self.witness = Some(Witness {
            graph: g.clone(),
            perm: p.clone(),
            node,
            lhs: lhs.to_vec(),
            rhs: rhs.to_vec(),
        });
    }
}

/// Test one equation; records a witness and returns true on violation.
fn check_equation(
    report: &mut CompatReport,
    tol: &Tolerance,
    f: &GraphFunction,
    g: &Graph,
    base: &[Vec<Scalar>],
    p: &Permutation,
    node: usize,
) -> Result<bool> {
    let relabeled = f.eval(&g.apply_iwfp(p)?)?;
    report.constraints_checked += 1;
    let lhs = &base[p.apply(node)];
    let rhs = &relabeled[node];
    if !tol.eq_vec(lhs, rhs) {
        report.violate(g, p, node, lhs, rhs);
        return Ok(true);
    }
    Ok(false)
}

/// Full enumeration: all `n!` permutations, all `n` nodes per permutation.
/// Stops at the first violation.
pub fn check_full(f: &GraphFunction, graphs: &[Graph], tol: &Tolerance) -> Result<CompatReport> {
    let mut report = CompatReport::new(&f.name, "full", *tol);
    for g in graphs {
        let base = f.eval(g)?;
        for p in enumerate_sn(g.n())? {
            let relabeled = f.eval(&g.apply_iwfp(&p)?)?;
            for i in 0..g.n() {
                report.constraints_checked += 1;
                let lhs = &base[p.apply(i)];
                let rhs = &relabeled[i];
                if !tol.eq_vec(lhs, rhs) {
                    report.violate(g, &p, i, lhs, rhs);
                    report.graphs_checked += 1;
                    return Ok(report);
                }
            }
        }
        report.graphs_checked += 1;
    }
    Ok(report)
}

/// Reduced enumeration around a pinned node `i0`: transpositions among the
/// other nodes (checked at `i0`), plus the transpositions moving `i0` to
/// each other node — `n(n-1)/2` equations per graph in total. Equivalent
/// in verdict to [`check_full`] over the same graphs.
pub fn check_reduced(
    f: &GraphFunction,
    graphs: &[Graph],
    i0: usize,
    tol: &Tolerance,
) -> Result<CompatReport> {
    let mut report = CompatReport::new(&f.name, "reduced", *tol);
    for g in graphs {
        let n = g.n();
        if i0 >= n {
            return Err(Error::invalid(format!(
                "pinned node {i0} out of range for n={n}"
            )));
        }
        let base = f.eval(g)?;
        // Stability at i0 under transpositions that fix it.
        for r in 0..n {
            for s in (r + 1)..n {
                if r == i0 || s == i0 {
                    continue;
                }
                let p = Permutation::transposition(n, r, s)?;
                if check_equation(&mut report, tol, f, g, &base, &p, i0)? {
                    report.graphs_checked += 1;
                    return Ok(report);
                }
            }
        }
        // Every other node's value is i0's value after moving it there.
        for j in 0..n {
            if j == i0 {
                continue;
            }
            let p = Permutation::transposition(n, i0, j)?;
            if check_equation(&mut report, tol, f, g, &base, &p, i0)? {
                report.graphs_checked += 1;
                return Ok(report);
            }
        }
        report.graphs_checked += 1;
    }
    Ok(report)
}

/// Checker for functions declared weight-oblivious. First validates the
/// declaration on every graph by resampling the weight matrix (an
/// [`Error::DeclarationViolation`] if the outputs move), then checks the
/// full equation set, which for such functions only exercises features.
pub fn check_feature_only(
    f: &GraphFunction,
    graphs: &[Graph],
    tol: &Tolerance,
    seed: u64,
) -> Result<CompatReport> {
    if !f.weight_oblivious {
        return Err(Error::invalid(format!(
            "{} is not declared weight-oblivious; use check_full",
            f.name
        )));
    }
    let mut report = CompatReport::new(&f.name, "feature-only", *tol);
    for (gi, g) in graphs.iter().enumerate() {
        let base = f.eval(g)?;
        // Declaration check: replace all weights, outputs must not move.
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("resample-{gi}")));
        let upper: Vec<Scalar> = crate::graph::upper_pairs(g.n())
            .map(|_| Scalar::int_of_kind(rng.gen_range(0..=10), g.kind()))
            .collect();
        let x: Vec<Vec<Scalar>> = (0..g.n()).map(|i| g.x_row(i).to_vec()).collect();
        let reweighted = Graph::from_upper(g.n(), g.d(), g.kind(), upper, x)?;
        let moved = f.eval(&reweighted)?;
        for i in 0..g.n() {
            if !tol.eq_vec(&base[i], &moved[i]) {
                return Err(Error::DeclarationViolation {
                    claim: "weight-oblivious",
                    node: i,
                    lhs: base[i].clone(),
                    rhs: moved[i].clone(),
                });
            }
        }
        // Equation set as in the full check.
        for p in enumerate_sn(g.n())? {
            let relabeled = f.eval(&g.apply_iwfp(&p)?)?;
            for i in 0..g.n() {
                report.constraints_checked += 1;
                if !tol.eq_vec(&base[p.apply(i)], &relabeled[i]) {
                    report.violate(g, &p, i, &base[p.apply(i)], &relabeled[i]);
                    report.graphs_checked += 1;
                    return Ok(report);
                }
            }
        }
        report.graphs_checked += 1;
    }
    Ok(report)
}

/// Checker for functions declared uniform across nodes and invariant under
/// relabeling (e.g. a global cut value reported at every node). Validates
/// uniformity (declaration error if rows differ), then checks invariance
/// of the single value — one equation per permutation.
pub fn check_uniform_invariant(
    f: &GraphFunction,
    graphs: &[Graph],
    tol: &Tolerance,
) -> Result<CompatReport> {
    if !f.uniform_invariant {
        return Err(Error::invalid(format!(
            "{} is not declared uniform-invariant; use check_full",
            f.name
        )));
    }
    let mut report = CompatReport::new(&f.name, "uniform-invariant", *tol);
    for g in graphs {
        let base = f.eval(g)?;
        for i in 1..g.n() {
            if !tol.eq_vec(&base[i], &base[0]) {
                return Err(Error::DeclarationViolation {
                    claim: "uniform across nodes",
                    node: i,
                    lhs: base[i].clone(),
                    rhs: base[0].clone(),
                });
            }
        }
        // With uniform rows, the equation at node 0 for each permutation
        // (lhs = base[p(0)] = base[0]) decides all of them.
        for p in enumerate_sn(g.n())? {
            let relabeled = f.eval(&g.apply_iwfp(&p)?)?;
            report.constraints_checked += 1;
            if !tol.eq_vec(&base[p.apply(0)], &relabeled[0]) {
                report.violate(g, &p, 0, &base[p.apply(0)], &relabeled[0]);
                report.graphs_checked += 1;
                return Ok(report);
            }
        }
        report.graphs_checked += 1;
    }
    Ok(report)
}

/// Witness hunter based on necessary conditions only: for every node,
/// sampled permutations that fix it; plus the transpositions moving node 0
/// onto each other node. Scales past the enumeration cap (stabilizer
/// permutations are sampled directly above it) but can never certify more
/// than the sample.
pub fn necessary_falsifier(
    f: &GraphFunction,
    graphs: &[Graph],
    tol: &Tolerance,
    samples_per_node: usize,
    seed: u64,
) -> Result<CompatReport> {
    let mut report = CompatReport::new(&f.name, "falsifier", *tol);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "falsifier"));
    for g in graphs {
        let n = g.n();
        let base = f.eval(g)?;
        for i in 0..n {
            let stab: Vec<Permutation> = if n <= DEFAULT_PERM_CAP {
                let mut all = enumerate_stabilizer(n, i)?;
                all.retain(|p| !p.is_identity());
                let k = samples_per_node.min(all.len());
                all.partial_shuffle(&mut rng, k).0.to_vec()
            } else {
                (0..samples_per_node)
                    .map(|_| {
                        let mut others: Vec<usize> = (0..n).filter(|&v| v != i).collect();
                        others.shuffle(&mut rng);
                        let mut image = vec![0usize; n];
                        image[i] = i;
                        let mut it = others.iter();
                        for v in 0..n {
                            if v != i {
                                image[v] = *it.next().expect("n-1 targets for n-1 slots");
                            }
                        }
                        Permutation::from_image(image).expect("constructed bijection")
                    })
                    .collect()
            };
            for p in stab {
                if check_equation(&mut report, tol, f, g, &base, &p, i)? {
                    report.graphs_checked += 1;
                    return Ok(report);
                }
            }
        }
        for j in 1..n {
            let p = Permutation::transposition(n, 0, j)?;
            if check_equation(&mut report, tol, f, g, &base, &p, 0)? {
                report.graphs_checked += 1;
                return Ok(report);
            }
        }
        report.graphs_checked += 1;
    }
    Ok(report)
}
