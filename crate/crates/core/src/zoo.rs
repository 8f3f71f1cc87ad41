//! A catalog of concrete node-level graph functions with known relabeling
//! behavior.
//!
//! Each entry evaluates to one output row per node. The catalog records,
//! for every function, whether it is expected to commute with node
//! relabeling — the checkers in [`crate::compat`] are tested against these
//! expectations, and two functions (the hardwired 3-node formula and the
//! distance to a fixed node) are the standing counterexamples.
//!
//! All functions run on either scalar kind. The sine in the 3-node formula
//! is `f64::sin` in float mode and a fixed odd polynomial in exact mode
//! (see [`crate::scalar::sin_scalar`]); both are deterministic functions,
//! which is all that matters for relabeling behavior.

use crate::graph::Graph;
use crate::mincut::{min_cut_bruteforce, min_cut_stoer_wagner};
use crate::paths::{shortest_paths_from, EdgeSemantics};
use crate::scalar::{sin_scalar, sum_scalars, Scalar};
use crate::{Error, Result};
use serde::Serialize;
use std::sync::Arc;

/// Largest `n` at which the min-cut entry uses the brute-force route;
/// beyond it, Stoer-Wagner.
pub const MINCUT_BRUTE_MAX_N: usize = 12;

/// Known relabeling behavior of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedVerdict {
    /// Commutes with relabeling on all graphs.
    Compatible,
    /// A relabeling witness exists (and the checkers are expected to find
    /// one on the standard samples).
    Incompatible,
}

/// Catalog metadata for one function.
#[derive(Debug, Clone, Serialize)]
pub struct ZooEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub expected: ExpectedVerdict,
    /// Ignores the weight matrix entirely.
    pub weight_oblivious: bool,
    /// Takes the same value on every node of a graph and is invariant
    /// under relabeling.
    pub uniform_invariant: bool,
    /// `Some(n)` if the function is only defined at one node count.
    pub exact_n: Option<usize>,
    /// Minimum feature dimension (0 = features unused).
    pub min_d: usize,
    /// `Some(d)` if the function needs exactly this feature dimension.
    pub exact_d: Option<usize>,
}

/// A node-level function ready to evaluate on graphs of one shape.
#[derive(Clone)]
pub struct GraphFunction {
    pub name: String,
    pub out_dim: usize,
    pub weight_oblivious: bool,
    pub uniform_invariant: bool,
    eval: Arc<dyn Fn(&Graph) -> Result<Vec<Vec<Scalar>>> + Send + Sync>,
}

impl std::fmt::Debug for GraphFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphFunction")
            .field("name", &self.name)
            .field("out_dim", &self.out_dim)
            .finish()
    }
}

impl GraphFunction {
    pub fn new(
        name: impl Into<String>,
        out_dim: usize,
        eval: impl Fn(&Graph) -> Result<Vec<Vec<Scalar>>> + Send + Sync + 'static,
    ) -> Self {
        GraphFunction {
            name: name.into(),
            out_dim,
            weight_oblivious: false,
            uniform_invariant: false,
            eval: Arc::new(eval),
        }
    }

    /// One output row per node.
    pub fn eval(&self, g: &Graph) -> Result<Vec<Vec<Scalar>>> {
        let rows = (self.eval)(g)?;
        debug_assert_eq!(rows.len(), g.n());
        Ok(rows)
    }

    /// Output row of a single node.
    pub fn eval_node(&self, g: &Graph, i: usize) -> Result<Vec<Scalar>> {
        let mut rows = self.eval(g)?;
        if i >= rows.len() {
            return Err(Error::invalid(format!("node {i} out of range")));
        }
        Ok(rows.swap_remove(i))
    }
}

/// The catalog.
pub fn zoo() -> Vec<ZooEntry> {
    vec![
        ZooEntry {
            name: "feature-oblivious",
            summary: "hardwired 3-node formula: two linear rows and one sine row",
            expected: ExpectedVerdict::Incompatible,
            weight_oblivious: false,
            uniform_invariant: false,
            exact_n: Some(3),
            min_d: 0,
            exact_d: None,
        },
        ZooEntry {
            name: "feature-identity",
            summary: "each node returns its own feature vector",
            expected: ExpectedVerdict::Compatible,
            weight_oblivious: true,
            uniform_invariant: false,
            exact_n: None,
            min_d: 1,
            exact_d: None,
        },
        ZooEntry {
            name: "feature-sum",
            summary: "every node returns the sum of all feature vectors",
            expected: ExpectedVerdict::Compatible,
            weight_oblivious: true,
            uniform_invariant: false,
            exact_n: None,
            min_d: 1,
            exact_d: None,
        },
        ZooEntry {
            name: "min-sum",
            summary: "minimum of own feature and the sum of the others' (scalar features)",
            expected: ExpectedVerdict::Compatible,
            weight_oblivious: true,
            uniform_invariant: false,
            exact_n: None,
            min_d: 1,
            exact_d: Some(1),
        },
        ZooEntry {
            name: "degree",
            summary: "weighted degree: sum of incident weights",
            expected: ExpectedVerdict::Compatible,
            weight_oblivious: false,
            uniform_invariant: false,
            exact_n: None,
            min_d: 0,
            exact_d: None,
        },
        ZooEntry {
            name: "max-neighbor-degree",
            summary: "maximum weighted degree among the other nodes",
            expected: ExpectedVerdict::Compatible,
            weight_oblivious: false,
            uniform_invariant: false,
            exact_n: None,
            min_d: 0,
            exact_d: None,
        },
        ZooEntry {
            name: "sp1",
            summary: "shortest-path distance to node 0 (zero weight = no edge)",
            expected: ExpectedVerdict::Incompatible,
            weight_oblivious: false,
            uniform_invariant: false,
            exact_n: None,
            min_d: 0,
            exact_d: None,
        },
        ZooEntry {
            name: "mincut",
            summary: "global minimum cut value, reported at every node",
            expected: ExpectedVerdict::Compatible,
            weight_oblivious: false,
            uniform_invariant: true,
            exact_n: None,
            min_d: 0,
            exact_d: None,
        },
    ]
}

/// Catalog metadata by name.
pub fn entry(name: &str) -> Result<ZooEntry> {
    zoo()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| {
            let names: Vec<&str> = zoo().iter().map(|e| e.name).collect();
            Error::invalid(format!(
                "unknown function {name:?}; catalog: {}",
                names.join(", ")
            ))
        })
}

/// Weighted degree of node `i`.
fn degree_of(g: &Graph, i: usize) -> Scalar {
    (0..g.n())
        .filter(|&j| j != i)
        .fold(Scalar::zero(g.kind()), |acc, j| &acc + g.w(i, j))
}

/// Instantiate a catalog function for graphs with `n` nodes and `d`-dim
/// features, validating applicability.
pub fn lookup(name: &str, n: usize, d: usize) -> Result<GraphFunction> {
    let e = entry(name)?;
    if let Some(need) = e.exact_n {
        if n != need {
            return Err(Error::invalid(format!(
                "{name} is only defined for n = {need}, got n = {n}"
            )));
        }
    }
    if d < e.min_d {
        return Err(Error::invalid(format!(
            "{name} needs feature dimension >= {}, got d = {d}",
            e.min_d
        )));
    }
    if let Some(need) = e.exact_d {
        if d != need {
            return Err(Error::invalid(format!(
                "{name} needs feature dimension exactly {need}, got d = {d}"
            )));
        }
    }
    if n < 2 {
        return Err(Error::invalid("catalog functions need n >= 2"));
    }

    let mut f = match name {
        "feature-oblivious" => GraphFunction::new(name, 1, |g: &Graph| {
            // Rows: w01 + w02, w01 + w12, sin(w02 + w12).
            Ok(vec![
                vec![g.w(0, 1) + g.w(0, 2)],
                vec![g.w(0, 1) + g.w(1, 2)],
                vec![sin_scalar(&(g.w(0, 2) + g.w(1, 2)))],
            ])
        }),
        "feature-identity" => GraphFunction::new(name, d, |g: &Graph| {
            Ok((0..g.n()).map(|i| g.x_row(i).to_vec()).collect())
        }),
        "feature-sum" => GraphFunction::new(name, d, |g: &Graph| {
            let total: Vec<Scalar> = (0..g.d())
                .map(|c| sum_scalars((0..g.n()).map(|i| &g.x_row(i)[c]), g.kind()))
                .collect();
            Ok(vec![total; g.n()])
        }),
        "min-sum" => GraphFunction::new(name, 1, |g: &Graph| {
            Ok((0..g.n())
                .map(|i| {
                    let others = sum_scalars(
                        (0..g.n()).filter(|&j| j != i).map(|j| &g.x_row(j)[0]),
                        g.kind(),
                    );
                    vec![g.x_row(i)[0].clone().min(others)]
                })
                .collect())
        }),
        "degree" => GraphFunction::new(name, 1, |g: &Graph| {
            Ok((0..g.n()).map(|i| vec![degree_of(g, i)]).collect())
        }),
        "max-neighbor-degree" => GraphFunction::new(name, 1, |g: &Graph| {
            let degs: Vec<Scalar> = (0..g.n()).map(|i| degree_of(g, i)).collect();
            Ok((0..g.n())
                .map(|i| {
                    let best = (0..g.n())
                        .filter(|&j| j != i)
                        .map(|j| degs[j].clone())
                        .reduce(Scalar::max)
                        .expect("n >= 2");
                    vec![best]
                })
                .collect())
        }),
        "sp1" => GraphFunction::new(name, 1, |g: &Graph| {
            let dist = shortest_paths_from(g, 0, &EdgeSemantics::zoo_default())?;
            Ok(dist.into_iter().map(|v| vec![v]).collect())
        }),
        "mincut" => GraphFunction::new(name, 1, |g: &Graph| {
            let cut = if g.n() <= MINCUT_BRUTE_MAX_N {
                min_cut_bruteforce(g)?
            } else {
                min_cut_stoer_wagner(g)?
            };
            Ok(vec![vec![cut.value]; g.n()])
        }),
        _ => unreachable!("entry() validated the name"),
    };
    f.weight_oblivious = e.weight_oblivious;
    f.uniform_invariant = e.uniform_invariant;
    Ok(f)
}
