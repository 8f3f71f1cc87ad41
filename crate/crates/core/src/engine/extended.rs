//! Multiset-aggregation programs and their conversion to plain
//! message-passing form.
//!
//! An aggregation layer updates each node from its own state and the
//! *multiset* of (neighbor state, connecting weight) pairs:
//! `h_i <- op(h_i, {(h_j, w_ij) : j != i})`. This is strictly more liberal
//! than summing messages — `max`, for instance, is not a sum — yet every
//! such program can be *converted* into a twice-as-deep message-passing
//! program: an odd layer that sums a multiset encoding (which loses
//! nothing, by the encoder property), followed by an even layer that looks
//! the encoded multiset up in a table calibrated from example runs. After
//! conversion, the states at even layers equal the original program's
//! states exactly; on inputs whose multisets never occurred during
//! calibration, the lookup reports a miss rather than guessing.

use crate::engine::{state_key, GnnProgram, LookupReadout, MessageFn};
use crate::mef::MefEncoder;
use crate::scalar::{Scalar, ScalarKind};
use crate::{Error, Graph, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// The closed set of aggregation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregateOp {
    /// `sum_j h_j * w_ij` (componentwise).
    SumScaledNeighbors,
    /// `sum_j (h_j + w_ij * ones)`.
    SumShiftedNeighbors,
    /// `max_j (h_j + w_ij * ones)` componentwise — not a sum of messages.
    MaxShiftedNeighbors,
    /// `sum_j w_ij`, collapsing the state to dimension 1.
    WeightSum,
}

impl AggregateOp {
    pub fn out_dim(&self, in_dim: usize) -> usize {
        match self {
            AggregateOp::WeightSum => 1,
            _ => in_dim,
        }
    }

    /// Apply to a canonical (sorted) list of (neighbor state, weight)
    /// pairs. Sorting first guarantees the op can only depend on the
    /// multiset, whatever its implementation.
    fn apply(&self, _h_i: &[Scalar], pairs: &[(Vec<Scalar>, Scalar)], kind: ScalarKind) -> Vec<Scalar> {
        match self {
            AggregateOp::SumScaledNeighbors => {
                let dim = pairs[0].0.len();
                let mut acc = vec![Scalar::zero(kind); dim];
                for (h, w) in pairs {
                    for (a, x) in acc.iter_mut().zip(h) {
                        *a = &*a + &(x * w);
                    }
                }
                acc
            }
            AggregateOp::SumShiftedNeighbors => {
                let dim = pairs[0].0.len();
                let mut acc = vec![Scalar::zero(kind); dim];
                for (h, w) in pairs {
                    for (a, x) in acc.iter_mut().zip(h) {
                        *a = &*a + &(x + w);
                    }
                }
                acc
            }
            AggregateOp::MaxShiftedNeighbors => {
                let mut best: Option<Vec<Scalar>> = None;
                for (h, w) in pairs {
                    let shifted: Vec<Scalar> = h.iter().map(|x| x + w).collect();
                    best = Some(match best {
                        None => shifted,
                        Some(b) => b
                            .into_iter()
                            .zip(shifted)
                            .map(|(a, s)| a.max(s))
                            .collect(),
                    });
                }
                best.expect("n >= 2 gives at least one pair")
            }
            AggregateOp::WeightSum => {
                let mut acc = Scalar::zero(kind);
                for (_, w) in pairs {
                    acc = &acc + w;
                }
                vec![acc]
            }
        }
    }
}

/// A multiset-aggregation program.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ExtendedGnnProgram {
    pub d_in: usize,
    pub ops: Vec<AggregateOp>,
}

impl ExtendedGnnProgram {
    /// State dimensions `[d_in, after op 1, ...]`.
    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.d_in];
        for op in &self.ops {
            let prev = *dims.last().expect("non-empty");
            dims.push(op.out_dim(prev));
        }
        dims
    }
}

/// Run an aggregation program, returning states after every layer
/// (index 0 = input features).
pub fn run_extended_trace(
    prog: &ExtendedGnnProgram,
    g: &Graph,
) -> Result<Vec<Vec<Vec<Scalar>>>> {
    if g.d() != prog.d_in {
        return Err(Error::invalid(format!(
            "program expects feature dimension {}, graph has {}",
            prog.d_in,
            g.d()
        )));
    }
    if g.n() < 2 {
        return Err(Error::invalid("aggregation needs n >= 2"));
    }
    let n = g.n();
    let mut trace: Vec<Vec<Vec<Scalar>>> =
        vec![(0..n).map(|i| g.x_row(i).to_vec()).collect()];
    for op in &prog.ops {
        let prev = trace.last().expect("non-empty");
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            // Canonicalize to the multiset before applying the op.
            let mut pairs: Vec<(Vec<Scalar>, Scalar)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (prev[j].clone(), g.w(i, j).clone()))
                .collect();
            pairs.sort();
            next.push(op.apply(&prev[i], &pairs, g.kind()));
        }
        trace.push(next);
    }
    Ok(trace)
}

/// Final states of an aggregation program.
pub fn run_extended(prog: &ExtendedGnnProgram, g: &Graph) -> Result<Vec<Vec<Scalar>>> {
    Ok(run_extended_trace(prog, g)?
        .pop()
        .expect("trace contains the input layer"))
}

/// Convert an aggregation program into a message-passing program of twice
/// the depth, calibrated on the given example graphs (all of which must
/// have `n` nodes, the program's input dimension, and exact scalars).
///
/// Layer `2r+1` keeps the old state and sums a multiset encoding of the
/// (neighbor state, weight) pairs; layer `2r+2` maps that encoding to the
/// aggregation result through an exact lookup table populated from the
/// calibration runs. Running the converted program on a graph whose
/// multiset at some layer was never calibrated fails with
/// [`Error::UnseenKey`] instead of inventing a value.
pub fn convert_extended_to_gnn(
    ext: &ExtendedGnnProgram,
    n: usize,
    calibration: &[Graph],
) -> Result<GnnProgram> {
    if n < 2 {
        return Err(Error::invalid("conversion needs n >= 2"));
    }
    if ext.d_in == 0 {
        return Err(Error::invalid("conversion needs input dimension >= 1"));
    }
    if calibration.is_empty() {
        return Err(Error::invalid("conversion needs calibration graphs"));
    }
    for g in calibration {
        if g.n() != n || g.d() != ext.d_in {
            return Err(Error::invalid(
                "calibration graphs must match the conversion shape (n, d)",
            ));
        }
        if g.kind() != ScalarKind::Rational {
            return Err(Error::ExactRequired { op: "conversion" });
        }
    }

    let dims = ext.layer_dims();
    // Per original layer: the encoder for (state ++ weight) vectors and the
    // lookup table keyed by the full odd-layer state.
    let mut encoders = Vec::with_capacity(ext.ops.len());
    let mut tables: Vec<BTreeMap<String, Vec<Scalar>>> =
        vec![BTreeMap::new(); ext.ops.len()];
    for r in 0..ext.ops.len() {
        encoders.push(MefEncoder::complex_tensor(dims[r] + 1, n - 1)?);
    }

    for g in calibration {
        let trace = run_extended_trace(ext, g)?;
        for r in 0..ext.ops.len() {
            let prev = &trace[r];
            let next = &trace[r + 1];
            for i in 0..n {
                // The exact state the converted program's odd layer 2r+1
                // produces at node i.
                let mut odd_state = prev[i].clone();
                let encoded = encoders[r].sum_encode(
                    &(0..n)
                        .filter(|&j| j != i)
                        .map(|j| {
                            let mut v = prev[j].clone();
                            v.push(g.w(i, j).clone());
                            v
                        })
                        .collect::<Vec<_>>(),
                )?;
                odd_state.extend(encoded);
                let key = state_key(&odd_state);
                let value = next[i].clone();
                if let Some(existing) = tables[r].get(&key) {
                    if *existing != value {
                        // The encoder property makes the key determine the
                        // multiset; only a non-multiset op could land here.
                        return Err(Error::invalid(format!(
                            "aggregation op {r} is not well-defined on multisets"
                        )));
                    }
                } else {
                    tables[r].insert(key, value);
                }
            }
        }
    }

    let mut layers = Vec::with_capacity(2 * ext.ops.len());
    for (r, table) in tables.into_iter().enumerate() {
        layers.push(MessageFn::KeepSelfPrefixEncodeNeighbor {
            take: dims[r],
            enc: encoders[r].clone(),
            split: dims[r],
        });
        layers.push(MessageFn::LookupReadout(LookupReadout {
            table: Arc::new(table),
            out_dim: dims[r + 1],
            layer_label: 2 * r + 2,
        }));
    }
    Ok(GnnProgram {
        d_in: ext.d_in,
        layers,
    })
}

/// Check that the converted program reproduces the original at every even
/// layer on one graph. Returns the first mismatching (layer, node) if any.
pub fn even_layer_mismatch(
    ext: &ExtendedGnnProgram,
    converted: &GnnProgram,
    g: &Graph,
) -> Result<Option<(usize, usize)>> {
    let et = run_extended_trace(ext, g)?;
    let ct = crate::engine::run_gnn_trace(converted, g)?;
    for r in 0..=ext.ops.len() {
        for i in 0..g.n() {
            if et[r][i] != ct[2 * r][i] {
                return Ok(Some((r, i)));
            }
        }
    }
    Ok(None)
}
