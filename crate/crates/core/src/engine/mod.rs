//! A reference interpreter for message-passing programs.
//!
//! A program is a list of layers; each layer replaces every node state by
//! the sum of a message function over the other nodes:
//! `h_i <- sum_{j != i} msg(h_i, h_j, w_ij)`. Node indices are *not* an
//! input to any legitimate message function — one deliberately broken
//! variant ([`MessageFn::IndexLeak`]) reads them, and exists so the
//! equivariance checker has something to catch.
//!
//! The message functions are a small closed set rather than arbitrary
//! closures: everything the library synthesizes or converts lands on one of
//! these shapes, and a closed set keeps programs printable, cloneable and
//! auditable.

pub mod checks;
pub mod extended;
pub mod random;

use crate::mef::MefEncoder;
use crate::scalar::{Scalar, ScalarKind};
use crate::{Error, Graph, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

pub use checks::{check_equivariance, orbit_equality_demo, orbit_equality_demo_with_autos,
    EquivarianceReport, EquivarianceWitness, OrbitDemo};
pub use extended::{convert_extended_to_gnn, even_layer_mismatch, run_extended,
    run_extended_trace, AggregateOp, ExtendedGnnProgram};
pub use random::RandomProgramFamily;

/// Canonical, injective serialization of a state vector; the key format of
/// every lookup layer. Length prefix plus the canonical scalar strings.
pub fn state_key(v: &[Scalar]) -> String {
    let mut s = String::with_capacity(4 + v.len() * 8);
    s.push_str(&v.len().to_string());
    s.push(';');
    for (k, x) in v.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&x.canonical_string());
    }
    s
}

/// Everything a message function may look at.
pub struct MessageContext<'a> {
    pub i: usize,
    pub j: usize,
    pub h_i: &'a [Scalar],
    pub h_j: &'a [Scalar],
    pub w_ij: &'a Scalar,
    pub n: usize,
    pub kind: ScalarKind,
}

/// A lookup table from serialized states to output vectors, shared by the
/// synthesis readout and the conversion's even layers.
#[derive(Debug, Clone)]
pub struct LookupReadout {
    pub table: Arc<BTreeMap<String, Vec<Scalar>>>,
    pub out_dim: usize,
    /// 1-based layer position, reported in lookup-miss errors.
    pub layer_label: usize,
}

/// Affine map plus a bounded odd nonlinearity, with small-rational
/// constants materialized in the graph's scalar kind at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomAffine {
    pub in_dim: usize,
    pub out_dim: usize,
    /// Row-major `out_dim x (2 in_dim + 1)` numerators over `denom`.
    pub weights: Vec<Vec<i64>>,
    pub bias: Vec<i64>,
    pub denom: i64,
}

/// The closed set of message functions.
#[derive(Debug, Clone)]
pub enum MessageFn {
    /// `[w_ij]`.
    EdgeWeight,
    /// `h_j`.
    NeighborState,
    /// `h_j * w_ij` componentwise.
    WeightedNeighborState,
    /// `h_i / (n-1)` — summing reproduces `h_i` unchanged.
    SelfMean,
    /// BROKEN ON PURPOSE: returns the raw node index `i`. Not a function of
    /// (states, weight), so it cannot commute with relabeling.
    IndexLeak,
    /// Affine-plus-squash family used for randomized programs.
    RandomAffine(RandomAffine),
    /// `(h_i / (n-1)) ++ enc([w_ij])`: keep the whole self state, encode
    /// the incident weight.
    KeepSelfEncodeWeight { enc: MefEncoder },
    /// `(h_i[..take] / (n-1)) ++ enc(h_j[..split] ++ [w_ij] ++ h_j[split..])`:
    /// keep a prefix of the self state, encode the neighbor state with the
    /// connecting weight spliced in at `split`.
    KeepSelfPrefixEncodeNeighbor {
        take: usize,
        enc: MefEncoder,
        split: usize,
    },
    /// `table[key(h_i)] / (n-1)` — an exact memorized readout of the self
    /// state; summing over the other nodes reproduces the table value.
    LookupReadout(LookupReadout),
}

impl MessageFn {
    /// Output dimension given the incoming state dimension.
    pub fn out_dim(&self, in_dim: usize) -> usize {
        match self {
            MessageFn::EdgeWeight | MessageFn::IndexLeak => 1,
            MessageFn::NeighborState
            | MessageFn::WeightedNeighborState
            | MessageFn::SelfMean => in_dim,
            MessageFn::RandomAffine(ra) => ra.out_dim,
            MessageFn::KeepSelfEncodeWeight { enc } => in_dim + enc.out_dim(),
            MessageFn::KeepSelfPrefixEncodeNeighbor { take, enc, .. } => take + enc.out_dim(),
            MessageFn::LookupReadout(lr) => lr.out_dim,
        }
    }

    /// Evaluate one message.
    pub fn eval(&self, ctx: &MessageContext<'_>) -> Result<Vec<Scalar>> {
        let n_minus_1 = Scalar::int_of_kind(ctx.n as i64 - 1, ctx.kind);
        match self {
            MessageFn::EdgeWeight => Ok(vec![ctx.w_ij.clone()]),
            MessageFn::NeighborState => Ok(ctx.h_j.to_vec()),
            MessageFn::WeightedNeighborState => {
                Ok(ctx.h_j.iter().map(|h| h * ctx.w_ij).collect())
            }
            MessageFn::SelfMean => Ok(ctx.h_i.iter().map(|h| h / &n_minus_1).collect()),
            MessageFn::IndexLeak => Ok(vec![Scalar::int_of_kind(ctx.i as i64, ctx.kind)]),
            MessageFn::RandomAffine(ra) => {
                if ctx.h_i.len() != ra.in_dim {
                    return Err(Error::invalid(format!(
                        "affine message expects state dimension {}, got {}",
                        ra.in_dim,
                        ctx.h_i.len()
                    )));
                }
                let den = Scalar::int_of_kind(ra.denom, ctx.kind);
                let mut z: Vec<Scalar> = Vec::with_capacity(2 * ra.in_dim + 1);
                z.extend(ctx.h_i.iter().cloned());
                z.extend(ctx.h_j.iter().cloned());
                z.push(ctx.w_ij.clone());
                let one = Scalar::one(ctx.kind);
                Ok((0..ra.out_dim)
                    .map(|r| {
                        let mut acc = &Scalar::int_of_kind(ra.bias[r], ctx.kind) / &den;
                        for (c, zc) in z.iter().enumerate() {
                            let wrc = &Scalar::int_of_kind(ra.weights[r][c], ctx.kind) / &den;
                            acc = &acc + &(&wrc * zc);
                        }
                        // Bounded odd squash t / (1 + t^2): exact on
                        // rationals, finite on floats.
                        let denom = &one + &(&acc * &acc);
                        &acc / &denom
                    })
                    .collect())
            }
            MessageFn::KeepSelfEncodeWeight { enc } => {
                let mut out: Vec<Scalar> =
                    ctx.h_i.iter().map(|h| h / &n_minus_1).collect();
                out.extend(enc.encode(&[ctx.w_ij.clone()])?);
                Ok(out)
            }
            MessageFn::KeepSelfPrefixEncodeNeighbor { take, enc, split } => {
                if *take > ctx.h_i.len() || *split > ctx.h_j.len() {
                    return Err(Error::invalid(
                        "message prefix exceeds the state dimension",
                    ));
                }
                let mut out: Vec<Scalar> =
                    ctx.h_i[..*take].iter().map(|h| h / &n_minus_1).collect();
                let mut enc_in: Vec<Scalar> = Vec::with_capacity(ctx.h_j.len() + 1);
                enc_in.extend_from_slice(&ctx.h_j[..*split]);
                enc_in.push(ctx.w_ij.clone());
                enc_in.extend_from_slice(&ctx.h_j[*split..]);
                out.extend(enc.encode(&enc_in)?);
                Ok(out)
            }
            MessageFn::LookupReadout(lr) => {
                let key = state_key(ctx.h_i);
                match lr.table.get(&key) {
                    Some(v) => Ok(v.iter().map(|s| s / &n_minus_1).collect()),
                    None => Err(Error::UnseenKey {
                        layer: lr.layer_label,
                        key,
                    }),
                }
            }
        }
    }
}

/// A message-passing program: input feature dimension plus one message
/// function per layer.
#[derive(Debug, Clone)]
pub struct GnnProgram {
    pub d_in: usize,
    pub layers: Vec<MessageFn>,
}

impl GnnProgram {
    /// State dimensions `[d_in, dim after layer 1, ...]`.
    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.d_in];
        for layer in &self.layers {
            let prev = *dims.last().expect("dims starts non-empty");
            dims.push(layer.out_dim(prev));
        }
        dims
    }

    /// Output dimension of the final layer.
    pub fn out_dim(&self) -> usize {
        *self.layer_dims().last().expect("dims non-empty")
    }
}

/// Run a program, returning the state of every node after every layer
/// (index 0 = the input features).
pub fn run_gnn_trace(prog: &GnnProgram, g: &Graph) -> Result<Vec<Vec<Vec<Scalar>>>> {
    if g.d() != prog.d_in {
        return Err(Error::invalid(format!(
            "program expects feature dimension {}, graph has {}",
            prog.d_in,
            g.d()
        )));
    }
    if g.n() < 2 {
        return Err(Error::invalid("message passing needs n >= 2"));
    }
    let n = g.n();
    let mut trace: Vec<Vec<Vec<Scalar>>> =
        vec![(0..n).map(|i| g.x_row(i).to_vec()).collect()];
    for (li, layer) in prog.layers.iter().enumerate() {
        let prev = trace.last().expect("trace starts non-empty");
        let out_dim = layer.out_dim(prev[0].len());
        let mut next: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = vec![Scalar::zero(g.kind()); out_dim];
            for j in 0..n {
                if j == i {
                    continue;
                }
                let msg = layer.eval(&MessageContext {
                    i,
                    j,
                    h_i: &prev[i],
                    h_j: &prev[j],
                    w_ij: g.w(i, j),
                    n,
                    kind: g.kind(),
                })?;
                if msg.len() != out_dim {
                    return Err(Error::invalid(format!(
                        "layer {} produced dimension {}, expected {}",
                        li + 1,
                        msg.len(),
                        out_dim
                    )));
                }
                for (a, m) in acc.iter_mut().zip(&msg) {
                    *a = &*a + m;
                }
            }
            if g.kind() == ScalarKind::Float
                && acc.iter().any(|s| !s.to_f64().is_finite())
            {
                return Err(Error::NonFinite {
                    op: "message passing",
                });
            }
            next.push(acc);
        }
        trace.push(next);
    }
    Ok(trace)
}

/// Run a program and return only the final node states.
pub fn run_gnn(prog: &GnnProgram, g: &Graph) -> Result<Vec<Vec<Scalar>>> {
    Ok(run_gnn_trace(prog, g)?
        .pop()
        .expect("trace contains the input layer"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarKind;

    fn int(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn path3() -> Graph {
        Graph::from_upper(
            3,
            1,
            ScalarKind::Rational,
            vec![int(1), int(0), int(2)],
            vec![vec![int(10)], vec![int(20)], vec![int(30)]],
        )
        .unwrap()
    }

    #[test]
    fn edge_weight_layer_computes_degrees() {
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![MessageFn::EdgeWeight],
        };
        let states = run_gnn(&prog, &path3()).unwrap();
        assert_eq!(states, vec![vec![int(1)], vec![int(3)], vec![int(2)]]);
    }

    #[test]
    fn self_mean_layer_freezes_states() {
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![MessageFn::SelfMean, MessageFn::SelfMean],
        };
        let g = path3();
        let trace = run_gnn_trace(&prog, &g).unwrap();
        assert_eq!(trace[0], trace[1]);
        assert_eq!(trace[1], trace[2]);
    }

    #[test]
    fn neighbor_sum_layer_sums_other_states() {
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![MessageFn::NeighborState],
        };
        let states = run_gnn(&prog, &path3()).unwrap();
        assert_eq!(states, vec![vec![int(50)], vec![int(40)], vec![int(30)]]);
    }

    #[test]
    fn weighted_neighbor_layer_mixes_states_and_weights() {
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![MessageFn::WeightedNeighborState],
        };
        // Node 0: 1*20 + 0*30 = 20; node 1: 1*10 + 2*30 = 70; node 2: 0 + 2*20 = 40.
        let states = run_gnn(&prog, &path3()).unwrap();
        assert_eq!(states, vec![vec![int(20)], vec![int(70)], vec![int(40)]]);
    }

    #[test]
    fn layer_dims_chain() {
        let enc = MefEncoder::scalar_power(2).unwrap();
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![
                MessageFn::KeepSelfEncodeWeight { enc },
                MessageFn::NeighborState,
            ],
        };
        assert_eq!(prog.layer_dims(), vec![1, 3, 3]);
        assert_eq!(prog.out_dim(), 3);
    }

    #[test]
    fn lookup_readout_misses_are_reported() {
        let lr = LookupReadout {
            table: Arc::new(BTreeMap::new()),
            out_dim: 1,
            layer_label: 1,
        };
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![MessageFn::LookupReadout(lr)],
        };
        match run_gnn(&prog, &path3()) {
            Err(Error::UnseenKey { layer: 1, .. }) => {}
            other => panic!("expected a lookup miss, got {other:?}"),
        }
    }

    #[test]
    fn state_key_is_injective_on_distinct_states() {
        assert_ne!(
            state_key(&[int(1), int(23)]),
            state_key(&[int(12), int(3)])
        );
        assert_ne!(state_key(&[int(1)]), state_key(&[int(1), int(0)]));
        assert_eq!(
            state_key(&[Scalar::ratio(2, 4)]),
            state_key(&[Scalar::ratio(1, 2)])
        );
    }

    #[test]
    fn float_programs_run_with_float_graphs() {
        let g = Graph::from_upper(
            3,
            1,
            ScalarKind::Float,
            vec![Scalar::Float(1.0), Scalar::Float(0.0), Scalar::Float(2.0)],
            vec![
                vec![Scalar::Float(10.0)],
                vec![Scalar::Float(20.0)],
                vec![Scalar::Float(30.0)],
            ],
        )
        .unwrap();
        let prog = GnnProgram {
            d_in: 1,
            layers: vec![MessageFn::EdgeWeight],
        };
        let states = run_gnn(&prog, &g).unwrap();
        assert_eq!(states[1], vec![Scalar::Float(3.0)]);
    }
}
