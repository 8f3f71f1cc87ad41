//! Seeded random graph families.
//!
//! Four families, all with 0/1 edge weights:
//!
//! - **erg**: every pair independently an edge with probability `p_edge`.
//! - **ergs**: an erg over `n-2` nodes plus two *twin* nodes (the last two
//!   indices) that attach to exactly the same subset of the others, may or
//!   may not share an edge with each other, and are forced to carry equal
//!   features. Twins are indistinguishable by construction — the swap of
//!   the twin pair is always an automorphism — which makes this the family
//!   of choice for impossibility demos.
//! - **cg**: the cycle over `n` nodes.
//! - **lcg**: the ladder cycle — two parallel cycles of length `n/2` joined
//!   by rungs, every node of degree 3.
//!
//! All randomness flows through one `u64` seed into a ChaCha stream, making
//! output platform-independent; the draw order is fixed and documented in
//! [`generate`].

use crate::graph::Graph;
use crate::orbits::node_orbits;
use crate::perm::{Permutation, DEFAULT_PERM_CAP};
use crate::scalar::{Scalar, ScalarKind};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Graph family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Erg,
    Ergs,
    Cg,
    Lcg,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "erg" => Ok(Family::Erg),
            "ergs" => Ok(Family::Ergs),
            "cg" => Ok(Family::Cg),
            "lcg" => Ok(Family::Lcg),
            other => Err(Error::invalid(format!(
                "unknown family {other:?} (expected erg, ergs, cg, or lcg)"
            ))),
        }
    }
}

/// Feature initialization mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureInit {
    /// Every node gets the all-ones vector.
    Identical,
    /// Independent integer features in `0..=10` (twins still forced equal).
    Random,
}

/// Everything needed to generate one graph reproducibly.
#[derive(Debug, Clone, Serialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub d: usize,
    /// Edge probability; used by erg and ergs, ignored by cg and lcg.
    pub p_edge: f64,
    pub features: FeatureInit,
    pub kind: ScalarKind,
    pub seed: u64,
}

/// Provenance record emitted alongside each generated graph.
#[derive(Debug, Clone, Serialize)]
pub struct GenMeta {
    pub family: Family,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub rng: &'static str,
    /// The twin pair for ergs (always the last two nodes).
    pub twin_pair: Option<(usize, usize)>,
    /// Whether the twins ended up adjacent to each other.
    pub twins_adjacent: Option<bool>,
}

/// Outcome of [`assert_symmetric_pair`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SymmetricPairOutcome {
    /// Nodes `a` and `b` are exchanged by some automorphism.
    Found { a: usize, b: usize },
    /// No symmetric pair. `exhaustive` is true only when the full
    /// automorphism group was enumerated (small `n`); otherwise only
    /// transpositions were screened and a pair could still exist.
    NotFound { exhaustive: bool },
}

fn check_spec(spec: &GenSpec) -> Result<()> {
    if !(0.0..=1.0).contains(&spec.p_edge) {
        return Err(Error::invalid(format!(
            "edge probability must lie in [0, 1], got {}",
            spec.p_edge
        )));
    }
    match spec.family {
        Family::Erg if spec.n < 2 => Err(Error::invalid("erg needs n >= 2")),
        Family::Ergs if spec.n < 4 => Err(Error::invalid("ergs needs n >= 4")),
        Family::Cg if spec.n < 3 => Err(Error::invalid("cg needs n >= 3")),
        Family::Lcg if spec.n < 6 || spec.n % 2 != 0 => {
            Err(Error::invalid("lcg needs even n >= 6"))
        }
        _ => Ok(()),
    }
}

/// Generate one graph. Draw order (fixed for reproducibility): edge draws
/// in row-major pair order, then twin attachment draws, then the
/// twin-adjacency coin, then feature draws in node order.
pub fn generate(spec: &GenSpec) -> Result<(Graph, GenMeta)> {
    check_spec(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let kind = spec.kind;
    let mut w = vec![vec![Scalar::zero(kind); n]; n];
    let set_edge = |w: &mut Vec<Vec<Scalar>>, i: usize, j: usize| {
        w[i][j] = Scalar::one(kind);
        w[j][i] = Scalar::one(kind);
    };
    let mut twin_pair = None;
    let mut twins_adjacent = None;

    match spec.family {
        Family::Erg => {
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(spec.p_edge) {
                        set_edge(&mut w, i, j);
                    }
                }
            }
        }
        Family::Ergs => {
            let base = n - 2;
            let (ta, tb) = (n - 2, n - 1);
            for i in 0..base {
                for j in (i + 1)..base {
                    if rng.gen_bool(spec.p_edge) {
                        set_edge(&mut w, i, j);
                    }
                }
            }
            for k in 0..base {
                if rng.gen_bool(spec.p_edge) {
                    set_edge(&mut w, k, ta);
                    set_edge(&mut w, k, tb);
                }
            }
            let adj = rng.gen_bool(0.5);
            if adj {
                set_edge(&mut w, ta, tb);
            }
            twin_pair = Some((ta, tb));
            twins_adjacent = Some(adj);
        }
        Family::Cg => {
            for i in 0..n {
                set_edge(&mut w, i, (i + 1) % n);
            }
        }
        Family::Lcg => {
            let h = n / 2;
            for i in 0..h {
                set_edge(&mut w, i, (i + 1) % h);
                set_edge(&mut w, h + i, h + (i + 1) % h);
                set_edge(&mut w, i, h + i);
            }
        }
    }

    let sample_row = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
        (0..spec.d)
            .map(|_| Scalar::int_of_kind(rng.gen_range(0..=10), kind))
            .collect()
    };
    let x: Vec<Vec<Scalar>> = match spec.features {
        FeatureInit::Identical => vec![vec![Scalar::one(kind); spec.d]; n],
        FeatureInit::Random => {
            let mut rows: Vec<Vec<Scalar>> = (0..n).map(|_| sample_row(&mut rng)).collect();
            if let Some((ta, tb)) = twin_pair {
                rows[tb] = rows[ta].clone();
            }
            rows
        }
    };

    let graph = Graph::from_matrix(w, x)?;
    Ok((
        graph,
        GenMeta {
            family: spec.family,
            n,
            d: spec.d,
            seed: spec.seed,
            rng: "chacha8",
            twin_pair,
            twins_adjacent,
        },
    ))
}

/// Find a pair of nodes exchanged by an automorphism.
///
/// Strategy: screen all transpositions first (cheap at any `n`, and catches
/// the twin pair of every ergs graph); if none works and `n` is within the
/// enumeration cap, fall back to the full orbit partition. Beyond the cap a
/// negative answer is reported as non-exhaustive.
pub fn assert_symmetric_pair(g: &Graph) -> SymmetricPairOutcome {
    for a in 0..g.n() {
        for b in (a + 1)..g.n() {
            let t = Permutation::transposition(g.n(), a, b).expect("indices in range");
            if g.is_automorphism(&t) {
                return SymmetricPairOutcome::Found { a, b };
            }
        }
    }
    if g.n() <= DEFAULT_PERM_CAP {
        // Transpositions can miss pairs that are only exchanged by larger
        // automorphisms; the orbit partition cannot.
        let orbits = node_orbits(g).expect("n is within the enumeration cap");
        for orbit in orbits {
            if orbit.len() >= 2 {
                return SymmetricPairOutcome::Found {
                    a: orbit[0],
                    b: orbit[1],
                };
            }
        }
        SymmetricPairOutcome::NotFound { exhaustive: true }
    } else {
        SymmetricPairOutcome::NotFound { exhaustive: false }
    }
}
