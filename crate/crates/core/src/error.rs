//! The crate-wide error type.
//!
//! Errors fall into two groups: plain usage errors (bad dimensions, caps
//! exceeded, malformed input) and *informative* failures that carry a
//! mathematical witness — a readout collision that proves a function cannot
//! commute with relabeling, or a lookup miss that proves the calibration set
//! did not cover a multiset. The latter group is part of the library's
//! contract, not an afterthought: callers match on them.

use crate::scalar::Scalar;

/// Everything that can go wrong in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A size, index, or parameter was out of range for the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation that enumerates all n! permutations was asked to run
    /// above its configured cap.
    #[error("permutation enumeration over {n} nodes exceeds cap {cap}")]
    PermCapExceeded { n: usize, cap: usize },

    /// Exact-rational arithmetic was required but the input was float-valued.
    #[error("{op} requires exact rational scalars, got floats")]
    ExactRequired { op: &'static str },

    /// Two scalars of different kinds (rational vs float) met in arithmetic.
    #[error("mixed scalar kinds in {op}")]
    MixedKinds { op: &'static str },

    /// A graph file or JSON value did not match the expected schema.
    #[error("malformed graph input: {0}")]
    MalformedGraph(String),

    /// A shortest-path computation hit an edge it cannot handle.
    #[error("path computation rejected edge ({i},{j}) with weight {w}: {reason}")]
    BadEdge {
        i: usize,
        j: usize,
        w: String,
        reason: &'static str,
    },

    /// A function failed a property it was declared to have (for example,
    /// "weight-oblivious" or "uniform across nodes"). Carries the node
    /// where the claim broke and the two outputs that should have agreed.
    #[error("function declared {claim} violated the claim at node {node}")]
    DeclarationViolation {
        claim: &'static str,
        node: usize,
        lhs: Vec<Scalar>,
        rhs: Vec<Scalar>,
    },

    /// Fitting a readout table found one summary key mapped to two different
    /// target outputs — a proof that the target function does not factor
    /// through the summary and therefore cannot commute with relabeling.
    #[error("readout collision: two nodes with identical summaries need different outputs")]
    CompatibilityViolation(Box<ReadoutCollision>),

    /// A converted or synthesized program was run on a graph whose multiset
    /// of inputs never appeared during calibration, so the lookup layer has
    /// no entry for it.
    #[error("lookup miss in layer {layer}: key {key:?} was not seen during calibration")]
    UnseenKey { layer: usize, key: String },

    /// A float-valued computation produced a non-finite number.
    #[error("non-finite float in {op}")]
    NonFinite { op: &'static str },

    /// Underlying I/O failure (file read/write).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Underlying JSON failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Details of a readout-fitting collision: the shared lookup key and the two
/// incompatible records that claimed it.
#[derive(Debug, Clone)]
pub struct ReadoutCollision {
    /// Canonical serialization of the colliding summary vector.
    pub key: String,
    /// Output recorded first for this key.
    pub existing_output: Vec<Scalar>,
    /// Conflicting output required later for the same key.
    pub new_output: Vec<Scalar>,
    /// (calibration graph index, node index) of the first record.
    pub existing_site: (usize, usize),
    /// (calibration graph index, node index) of the conflicting record.
    pub new_site: (usize, usize),
}

impl Error {
    /// Shorthand for [`Error::InvalidArgument`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
