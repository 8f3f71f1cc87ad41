//! Exact verification and synthesis tools for node-level functions on
//! weighted graphs that are supposed to commute with node relabeling.
//!
//! The library is organized around a small set of building blocks:
//!
//! - [`scalar`], [`graph`], [`perm`], [`multiset`]: graphs with symmetric
//!   weight matrices and node features, exact-rational or float entries,
//!   and the induced action of a node permutation on a graph.
//! - [`orbits`]: automorphism groups and node orbits by brute force.
//! - [`mef`]: sum-decodable multiset encoders and their exact decoders.
//! - [`zoo`]: a catalog of concrete node functions (degrees, shortest
//!   paths, min cuts, ...) with known relabeling behavior, plus the
//!   graph algorithms backing them ([`paths`], [`mincut`]).
//! - [`gen`]: seeded random graph families used throughout the test rigs.
//! - [`engine`]: a reference interpreter for message-passing programs and
//!   for their multiset-aggregation variant, including the conversion of
//!   the latter into the former.
//! - [`compat`]: checkers that decide, over a graph sample, whether a node
//!   function commutes with relabeling — by full enumeration, by the
//!   reduced transposition test, or via cheaper special cases.
//! - [`synth`]: the constructive direction — an injective per-node summary,
//!   a lookup readout fitted on calibration graphs, and a three-round
//!   message-passing program that reproduces a compatible function exactly.

pub mod compat;
pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod mef;
pub mod mincut;
pub mod multiset;
pub mod orbits;
pub mod paths;
pub mod perm;
pub mod sampler;
pub mod scalar;
pub mod synth;
pub mod zoo;

pub use error::Error;
pub use graph::Graph;
pub use multiset::Multiset;
pub use perm::Permutation;
pub use scalar::{Scalar, ScalarKind};

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Derive a submodule seed from a root seed and a purpose label.
///
/// Every seeded entry point in the library consumes a plain `u64`; callers
/// that fan one user-facing seed out to several independent consumers use
/// this to keep the streams distinct and reproducible. FNV-1a over the label
/// bytes, folded into the root seed with an extra mixing step.
pub fn derive_seed(root: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    // splitmix64 finalizer so that nearby root seeds do not collide
    let mut z = root ^ h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
