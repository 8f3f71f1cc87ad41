//! The constructive route from a compatible node function to a runnable
//! message-passing program.
//!
//! The centerpiece is a *basis summary* `beta` per node: the node's own
//! features concatenated with a nested multiset-sum encoding of everything
//! two hops of summation can see — for each other node `j`, its features,
//! the connecting weight, and an encoding of `j`'s own incident-weight
//! multiset. Its combinatorial counterpart `delta` carries the same data as
//! literal multisets. The two determine each other exactly (the encoders
//! are injective on multisets of exact scalars), and both are invariant
//! under exactly the relabelings that fix the node.
//!
//! Because a compatible function's output at a node is determined by that
//! node's summary, an exact lookup table from serialized summaries to
//! outputs ([`RhoTable`]) is a faithful readout. [`synthesize_gnn`] then
//! packages summary computation plus readout as a three-layer program for
//! the reference interpreter, and [`intermediate_state_audit`] replays a
//! graph through the program checking every intermediate state against the
//! directly computed values.
//!
//! A key collision with differing targets during [`fit_rho`] is not a
//! failure of the machinery — it is a constructive proof that the target
//! function is *not* compatible, reported as
//! [`Error::CompatibilityViolation`].

use crate::engine::{state_key, GnnProgram, LookupReadout, MessageFn};
use crate::graph::Graph;
use crate::mef::MefEncoder;
use crate::multiset::Multiset;
use crate::perm::{enumerate_stabilizer, Permutation, DEFAULT_PERM_CAP};
use crate::scalar::{Scalar, ScalarKind};
use crate::zoo::GraphFunction;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The per-node summary builder for a fixed graph size and feature
/// dimension: an inner scalar encoder for incident-weight multisets and an
/// outer vector encoder for neighbor descriptors.
#[derive(Debug, Clone)]
pub struct BasisFunction {
    n: usize,
    d: usize,
    /// Inner encoder: multisets of `n-1` scalars (a node's incident weights).
    psi1: MefEncoder,
    /// Outer encoder: multisets of `n-1` descriptor vectors of dimension
    /// `d + n` (features ++ connecting weight ++ inner encoding).
    psi2: MefEncoder,
}

impl BasisFunction {
    pub fn new(n: usize, d: usize) -> Result<BasisFunction> {
        if n < 2 {
            return Err(Error::invalid("basis summaries need n >= 2"));
        }
        Ok(BasisFunction {
            n,
            d,
            psi1: MefEncoder::scalar_power(n - 1)?,
            psi2: MefEncoder::complex_tensor(d + n, n - 1)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Dimension of a summary vector: `d + (d+n)^2 (n-1)`.
    pub fn beta_dim(&self) -> usize {
        self.d + self.psi2.out_dim()
    }

    pub fn psi1(&self) -> &MefEncoder {
        &self.psi1
    }

    pub fn psi2(&self) -> &MefEncoder {
        &self.psi2
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n || g.d() != self.d {
            return Err(Error::invalid(format!(
                "summary builder is calibrated for (n, d) = ({}, {}), graph has ({}, {})",
                self.n,
                self.d,
                g.n(),
                g.d()
            )));
        }
        if g.kind() != ScalarKind::Rational {
            return Err(Error::ExactRequired {
                op: "basis summary",
            });
        }
        Ok(())
    }

    /// Per-node inner encodings: entry `j` is the encoder sum over node
    /// `j`'s incident weights. This is exactly the non-feature part of the
    /// state a [`MessageFn::KeepSelfEncodeWeight`] layer accumulates.
    pub fn psi1_sums(&self, g: &Graph) -> Result<Vec<Vec<Scalar>>> {
        self.check_graph(g)?;
        (0..self.n)
            .map(|j| {
                let incident: Vec<Vec<Scalar>> = (0..self.n)
                    .filter(|&l| l != j)
                    .map(|l| vec![g.w(j, l).clone()])
                    .collect();
                self.psi1.sum_encode(&incident)
            })
            .collect()
    }

    /// Descriptor of node `j` as seen from node `i`: features of `j`, the
    /// connecting weight, then the inner encoding of `j`'s incident weights.
    fn descriptor(&self, g: &Graph, i: usize, j: usize, psi1_sums: &[Vec<Scalar>]) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = Vec::with_capacity(self.d + self.n);
        v.extend_from_slice(g.x_row(j));
        v.push(g.w(i, j).clone());
        v.extend_from_slice(&psi1_sums[j]);
        v
    }

    /// Summary of node `i`: own features ++ outer encoder sum of the
    /// descriptors of all other nodes.
    pub fn beta(&self, g: &Graph, i: usize) -> Result<Vec<Scalar>> {
        let sums = self.psi1_sums(g)?;
        self.beta_with_sums(g, i, &sums)
    }

    fn beta_with_sums(&self, g: &Graph, i: usize, sums: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
        if i >= self.n {
            return Err(Error::invalid(format!(
                "node {i} out of range for n={}",
                self.n
            )));
        }
        let descriptors: Vec<Vec<Scalar>> = (0..self.n)
            .filter(|&j| j != i)
            .map(|j| self.descriptor(g, i, j, sums))
            .collect();
        let mut out: Vec<Scalar> = Vec::with_capacity(self.beta_dim());
        out.extend_from_slice(g.x_row(i));
        out.extend(self.psi2.sum_encode(&descriptors)?);
        Ok(out)
    }

    /// Summaries of all nodes, sharing the inner-encoding pass.
    pub fn beta_all(&self, g: &Graph) -> Result<Vec<Vec<Scalar>>> {
        let sums = self.psi1_sums(g)?;
        (0..self.n)
            .map(|i| self.beta_with_sums(g, i, &sums))
            .collect()
    }
}

/// Combinatorial counterpart of a summary: own features plus the literal
/// multiset of neighbor descriptors `(features, connecting weight,
/// sorted incident weights)`, flattened to fixed-shape vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeSignature {
    pub self_features: Vec<Scalar>,
    pub neighbors: Multiset,
}

/// Signature of node `i`. Exact-kind graphs only, to match the summary's
/// domain (the two are compared against each other).
pub fn delta(g: &Graph, i: usize) -> Result<NodeSignature> {
    if g.kind() != ScalarKind::Rational {
        return Err(Error::ExactRequired {
            op: "node signature",
        });
    }
    if i >= g.n() {
        return Err(Error::invalid(format!(
            "node {i} out of range for n={}",
            g.n()
        )));
    }
    let n = g.n();
    let descriptors: Vec<Vec<Scalar>> = (0..n)
        .filter(|&j| j != i)
        .map(|j| {
            let mut v: Vec<Scalar> = Vec::with_capacity(g.d() + n);
            v.extend_from_slice(g.x_row(j));
            v.push(g.w(i, j).clone());
            let mut incident: Vec<Scalar> = (0..n)
                .filter(|&l| l != j)
                .map(|l| g.w(j, l).clone())
                .collect();
            incident.sort();
            v.extend(incident);
            v
        })
        .collect();
    Ok(NodeSignature {
        self_features: g.x_row(i).to_vec(),
        neighbors: Multiset::from_vectors(descriptors),
    })
}

/// Search the permutations fixing node `i` for one relabeling `ga` into
/// `gb`. Returns the first match in lexicographic order plus whether the
/// search covered the whole group (it does not beyond the enumeration cap).
pub fn find_relating_stabilizer_perm(
    ga: &Graph,
    gb: &Graph,
    i: usize,
) -> Result<(Option<Permutation>, bool)> {
    if ga.n() != gb.n() || ga.d() != gb.d() {
        return Err(Error::invalid(
            "graphs of different shapes cannot be related by a relabeling",
        ));
    }
    if ga.n() > DEFAULT_PERM_CAP {
        return Ok((None, false));
    }
    for p in enumerate_stabilizer(ga.n(), i)? {
        if &ga.apply_iwfp(&p)? == gb {
            return Ok((Some(p), true));
        }
    }
    Ok((None, true))
}

/// One compared pair of graphs at a fixed node.
#[derive(Debug, Clone, Serialize)]
pub struct PairEquivalence {
    pub beta_equal: bool,
    pub delta_equal: bool,
    /// A node-fixing permutation relabeling the first graph into the
    /// second, when the brute-force search found one.
    pub relating_perm: Option<Permutation>,
    /// Whether the permutation search enumerated the entire stabilizer.
    pub perm_search_exhaustive: bool,
}

impl PairEquivalence {
    /// The unconditional facts: summary equality and signature equality
    /// must coincide, and a verified relating permutation forces both.
    /// (The converse — equality forcing a relating permutation to exist —
    /// holds for generic weights and is asserted by callers on the pair
    /// families they generate, not here.)
    pub fn consistent(&self) -> bool {
        self.beta_equal == self.delta_equal && (self.relating_perm.is_none() || self.beta_equal)
    }
}

/// Comparison of a batch of graph pairs at one node.
#[derive(Debug, Clone, Serialize)]
pub struct BetaDeltaReport {
    pub node: usize,
    pub pairs: Vec<PairEquivalence>,
    pub all_consistent: bool,
}

/// For each pair, compare summaries, compare signatures, and brute-search
/// for a relating node-fixing permutation; assert the two equalities
/// coincide pairwise.
pub fn verify_beta_delta_equivalence(
    bf: &BasisFunction,
    pairs: &[(Graph, Graph)],
    i: usize,
) -> Result<BetaDeltaReport> {
    let mut out = Vec::with_capacity(pairs.len());
    for (ga, gb) in pairs {
        let beta_equal = bf.beta(ga, i)? == bf.beta(gb, i)?;
        let delta_equal = delta(ga, i)? == delta(gb, i)?;
        let (relating_perm, perm_search_exhaustive) = find_relating_stabilizer_perm(ga, gb, i)?;
        out.push(PairEquivalence {
            beta_equal,
            delta_equal,
            relating_perm,
            perm_search_exhaustive,
        });
    }
    let all_consistent = out.iter().all(PairEquivalence::consistent);
    Ok(BetaDeltaReport {
        node: i,
        pairs: out,
        all_consistent,
    })
}

/// Exact readout table mapping serialized summaries to target outputs.
#[derive(Debug, Clone)]
pub struct RhoTable {
    map: Arc<BTreeMap<String, Vec<Scalar>>>,
    pub beta_dim: usize,
    pub out_dim: usize,
}

impl RhoTable {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Target output for a summary vector, if it was seen in calibration.
    pub fn lookup(&self, beta: &[Scalar]) -> Option<&Vec<Scalar>> {
        self.map.get(&state_key(beta))
    }

    /// Shared handle to the underlying table (read-only after fitting).
    pub fn table(&self) -> Arc<BTreeMap<String, Vec<Scalar>>> {
        Arc::clone(&self.map)
    }
}

/// Record `(summary of node i, f's output at node i)` for every node of
/// every calibration graph. Two different outputs demanded for one summary
/// key make the table ill-defined — and constitute a replayable proof that
/// `f` does not commute with relabeling, returned as
/// [`Error::CompatibilityViolation`] with both sites.
pub fn fit_rho(f: &GraphFunction, bf: &BasisFunction, graphs: &[Graph]) -> Result<RhoTable> {
    let mut map: BTreeMap<String, Vec<Scalar>> = BTreeMap::new();
    let mut sites: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut out_dim = f.out_dim;
    for (gi, g) in graphs.iter().enumerate() {
        let betas = bf.beta_all(g)?;
        let outs = f.eval(g)?;
        for i in 0..g.n() {
            out_dim = outs[i].len();
            let key = state_key(&betas[i]);
            match map.get(&key) {
                Some(existing) if existing != &outs[i] => {
                    let existing_site = sites[&key];
                    return Err(Error::CompatibilityViolation(Box::new(
                        crate::error::ReadoutCollision {
                            key,
                            existing_output: existing.clone(),
                            new_output: outs[i].clone(),
                            existing_site,
                            new_site: (gi, i),
                        },
                    )));
                }
                Some(_) => {}
                None => {
                    map.insert(key.clone(), outs[i].clone());
                    sites.insert(key, (gi, i));
                }
            }
        }
    }
    Ok(RhoTable {
        map: Arc::new(map),
        beta_dim: bf.beta_dim(),
        out_dim,
    })
}

/// Package summary computation plus readout as a three-layer program:
/// layer 1 accumulates each node's inner encoding behind its features,
/// layer 2 accumulates the outer encoding of neighbor descriptors behind
/// the features (so each state is exactly the node's summary), and layer 3
/// reads the fitted table.
pub fn synthesize_gnn(bf: &BasisFunction, rho: &RhoTable) -> Result<GnnProgram> {
    if rho.beta_dim != bf.beta_dim() {
        return Err(Error::invalid(format!(
            "readout table is keyed on dimension {}, summary builder produces {}",
            rho.beta_dim,
            bf.beta_dim()
        )));
    }
    Ok(GnnProgram {
        d_in: bf.d(),
        layers: vec![
            MessageFn::KeepSelfEncodeWeight {
                enc: bf.psi1().clone(),
            },
            MessageFn::KeepSelfPrefixEncodeNeighbor {
                take: bf.d(),
                enc: bf.psi2().clone(),
                split: bf.d(),
            },
            MessageFn::LookupReadout(LookupReadout {
                table: rho.table(),
                out_dim: rho.out_dim,
                layer_label: 3,
            }),
        ],
    })
}

/// Replay of one graph through a synthesized program, checking every
/// intermediate state against the directly computed value.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    /// Layer-1 states equal `features ++ inner encoding`, every node.
    pub layer1_matches: bool,
    /// Layer-2 states equal the node summaries, every node.
    pub layer2_matches: bool,
    /// Final states equal the table's entry for the *independently*
    /// computed summary, every node.
    pub readout_matches: bool,
    /// First failing (layer, node), if any.
    pub first_mismatch: Option<(usize, usize)>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.layer1_matches && self.layer2_matches && self.readout_matches
    }
}

/// Run a synthesized program on `g` and verify its internal states: layer 1
/// must hold `features ++ inner encoding`, layer 2 must hold the summary,
/// and the output must equal the table entry keyed by a summary computed
/// outside the interpreter.
pub fn intermediate_state_audit(
    prog: &GnnProgram,
    bf: &BasisFunction,
    g: &Graph,
) -> Result<AuditReport> {
    let lookup = match prog.layers.as_slice() {
        [MessageFn::KeepSelfEncodeWeight { .. }, MessageFn::KeepSelfPrefixEncodeNeighbor { .. }, MessageFn::LookupReadout(lr)] => {
            lr
        }
        _ => {
            return Err(Error::invalid(
                "state audit expects a three-layer summarize-then-lookup program",
            ))
        }
    };
    bf.check_graph(g)?;
    let trace = crate::engine::run_gnn_trace(prog, g)?;
    let sums = bf.psi1_sums(g)?;
    let betas = bf.beta_all(g)?;
    let mut report = AuditReport {
        layer1_matches: true,
        layer2_matches: true,
        readout_matches: true,
        first_mismatch: None,
    };
    let record = |report: &mut AuditReport, layer: usize, node: usize| {
        if report.first_mismatch.is_none() {
            report.first_mismatch = Some((layer, node));
        }
    };
    for j in 0..g.n() {
        let mut expect: Vec<Scalar> = g.x_row(j).to_vec();
        expect.extend_from_slice(&sums[j]);
        if trace[1][j] != expect {
            report.layer1_matches = false;
            record(&mut report, 1, j);
        }
    }
    for i in 0..g.n() {
        if trace[2][i] != betas[i] {
            report.layer2_matches = false;
            record(&mut report, 2, i);
        }
    }
    for i in 0..g.n() {
        match lookup.table.get(&state_key(&betas[i])) {
            Some(expected) if &trace[3][i] == expected => {}
            _ => {
                report.readout_matches = false;
                record(&mut report, 3, i);
            }
        }
    }
    Ok(report)
}
