//! Weighted graphs with node features, and the action of node relabeling.
//!
//! A graph is a symmetric `n x n` scalar weight matrix with zero diagonal
//! plus an `n x d` feature matrix, all entries of one scalar kind. Weight 0
//! is a legal value like any other; whether it means "no edge" is decided by
//! the consumer (see [`crate::paths::EdgeSemantics`]).
//!
//! Relabeling a graph by a permutation `p` produces the graph whose entry
//! `(i, j)` is `w[p(i)][p(j)]` and whose row `i` of features is `x[p(i)]`.
//! Note the contravariant composition: relabeling by `p2 ∘ p1` equals
//! relabeling by `p2` first and then by `p1` (covered by a property test).

use crate::perm::Permutation;
use crate::scalar::{parse_rational, Scalar, ScalarKind};
use crate::{Error, Result};
use serde_json::{json, Value};

/// An undirected weighted graph with node features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    d: usize,
    kind: ScalarKind,
    /// Full symmetric matrix, `w[i][j] == w[j][i]`, zero diagonal.
    w: Vec<Vec<Scalar>>,
    /// Feature rows, one per node, each of length `d`.
    x: Vec<Vec<Scalar>>,
}

/// Index pairs `(i, j)` with `i < j` in row-major order — the layout of the
/// serialized strict upper triangle.
pub fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

impl Graph {
    /// Build from the strict upper triangle (row-major) and feature rows.
    pub fn from_upper(
        n: usize,
        d: usize,
        kind: ScalarKind,
        upper: Vec<Scalar>,
        x: Vec<Vec<Scalar>>,
    ) -> Result<Graph> {
        if n < 2 {
            return Err(Error::invalid(format!("graph needs n >= 2, got {n}")));
        }
        let want = n * (n - 1) / 2;
        if upper.len() != want {
            return Err(Error::invalid(format!(
                "expected {want} upper-triangle weights for n={n}, got {}",
                upper.len()
            )));
        }
        if x.len() != n || x.iter().any(|row| row.len() != d) {
            return Err(Error::invalid(format!(
                "expected {n} feature rows of length {d}"
            )));
        }
        for s in upper.iter().chain(x.iter().flatten()) {
            if s.kind() != kind {
                return Err(Error::MixedKinds {
                    op: "graph construction",
                });
            }
            if let Scalar::Float(f) = s {
                if !f.is_finite() {
                    return Err(Error::NonFinite {
                        op: "graph construction",
                    });
                }
            }
        }
        let mut w = vec![vec![Scalar::zero(kind); n]; n];
        let mut it = upper.into_iter();
        for (i, j) in upper_pairs(n) {
            let s = it.next().expect("length checked above");
            w[i][j] = s.clone();
            w[j][i] = s;
        }
        Ok(Graph { n, d, kind, w, x })
    }

    /// Build from a full matrix; validates symmetry and zero diagonal.
    pub fn from_matrix(w: Vec<Vec<Scalar>>, x: Vec<Vec<Scalar>>) -> Result<Graph> {
        let n = w.len();
        if n < 2 || w.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("weight matrix must be square with n >= 2"));
        }
        for i in 0..n {
            if !w[i][i].is_zero() {
                return Err(Error::invalid(format!("nonzero diagonal at ({i},{i})")));
            }
            for j in (i + 1)..n {
                if w[i][j] != w[j][i] {
                    return Err(Error::invalid(format!("asymmetric entries at ({i},{j})")));
                }
            }
        }
        let upper: Vec<Scalar> = upper_pairs(n).map(|(i, j)| w[i][j].clone()).collect();
        let d = x.first().map_or(0, |row| row.len());
        let kind = upper
            .first()
            .or_else(|| x.iter().flatten().next())
            .map_or(ScalarKind::Rational, Scalar::kind);
        Graph::from_upper(n, d, kind, upper, x)
    }

    /// The complete graph with all weights 1 and all features 1.
    pub fn unit_complete(n: usize, d: usize, kind: ScalarKind) -> Result<Graph> {
        Graph::from_upper(
            n,
            d,
            kind,
            vec![Scalar::one(kind); n * (n - 1) / 2],
            vec![vec![Scalar::one(kind); d]; n],
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    /// Weight of the pair `{i, j}`; the diagonal is always zero.
    pub fn w(&self, i: usize, j: usize) -> &Scalar {
        &self.w[i][j]
    }

    /// Feature row of node `i`.
    pub fn x_row(&self, i: usize) -> &[Scalar] {
        &self.x[i]
    }

    /// Strict upper triangle in row-major order.
    pub fn upper(&self) -> Vec<Scalar> {
        upper_pairs(self.n)
            .map(|(i, j)| self.w[i][j].clone())
            .collect()
    }

    /// Sum of `|w[i][j]|` over unordered pairs.
    pub fn total_abs_weight(&self) -> Scalar {
        upper_pairs(self.n).fold(Scalar::zero(self.kind), |acc, (i, j)| {
            &acc + &self.w[i][j].abs()
        })
    }

    /// The graph relabeled by `p`: entry `(i, j)` becomes `w[p(i)][p(j)]`,
    /// feature row `i` becomes `x[p(i)]`.
    pub fn apply_iwfp(&self, p: &Permutation) -> Result<Graph> {
        if p.n() != self.n {
            return Err(Error::invalid(format!(
                "permutation over {} nodes applied to graph with n={}",
                p.n(),
                self.n
            )));
        }
        let w = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.w[p.apply(i)][p.apply(j)].clone())
                    .collect()
            })
            .collect();
        let x = (0..self.n).map(|i| self.x[p.apply(i)].clone()).collect();
        Ok(Graph {
            n: self.n,
            d: self.d,
            kind: self.kind,
            w,
            x,
        })
    }

    /// Whether `p` maps the graph onto itself.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.n() == self.n && self.apply_iwfp(p).map_or(false, |g| g == *self)
    }

    // ---- JSON serialization ----

    /// Serialize to the on-disk JSON shape. Rational entries become `"p/q"`
    /// strings (or `"p"` for integers); float entries become JSON numbers.
    pub fn to_json_value(&self) -> Value {
        let entry = |s: &Scalar| -> Value {
            match s {
                Scalar::Rational(_) => Value::String(s.canonical_string()),
                Scalar::Float(f) => json!(f),
            }
        };
        json!({
            "n": self.n,
            "d": self.d,
            "scalar": match self.kind {
                ScalarKind::Rational => "rational",
                ScalarKind::Float => "float",
            },
            "w_upper": self.upper().iter().map(entry).collect::<Vec<_>>(),
            "x": self.x.iter()
                .map(|row| row.iter().map(entry).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph json never fails")
    }

    pub fn from_json_value(v: &Value) -> Result<Graph> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::MalformedGraph("top level must be an object".into()))?;
        let get = |key: &str| {
            obj.get(key)
                .ok_or_else(|| Error::MalformedGraph(format!("missing field {key:?}")))
        };
        let n = get("n")?
            .as_u64()
            .ok_or_else(|| Error::MalformedGraph("n must be a non-negative integer".into()))?
            as usize;
        let d = get("d")?
            .as_u64()
            .ok_or_else(|| Error::MalformedGraph("d must be a non-negative integer".into()))?
            as usize;
        let kind = match get("scalar")?.as_str() {
            Some("rational") => ScalarKind::Rational,
            Some("float") => ScalarKind::Float,
            other => {
                return Err(Error::MalformedGraph(format!(
                    "scalar must be \"rational\" or \"float\", got {other:?}"
                )))
            }
        };
        let parse_entry = |v: &Value| -> Result<Scalar> {
            match (kind, v) {
                (ScalarKind::Rational, Value::String(s)) => {
                    Ok(Scalar::Rational(parse_rational(s)?))
                }
                (ScalarKind::Rational, Value::Number(num)) => {
                    // Integers are exact; any other number would be lossy.
                    num.as_i64().map(Scalar::from_int).ok_or_else(|| {
                        Error::MalformedGraph(format!(
                            "rational graphs need \"p/q\" strings or integers, got {num}"
                        ))
                    })
                }
                (ScalarKind::Float, Value::Number(num)) => num
                    .as_f64()
                    .filter(|f| f.is_finite())
                    .map(Scalar::Float)
                    .ok_or_else(|| Error::MalformedGraph(format!("bad float entry {num}"))),
                (_, other) => Err(Error::MalformedGraph(format!(
                    "bad {kind} entry {other}"
                ))),
            }
        };
        let upper = get("w_upper")?
            .as_array()
            .ok_or_else(|| Error::MalformedGraph("w_upper must be an array".into()))?
            .iter()
            .map(parse_entry)
            .collect::<Result<Vec<_>>>()?;
        let x = get("x")?
            .as_array()
            .ok_or_else(|| Error::MalformedGraph("x must be an array of rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::MalformedGraph("each x row must be an array".into()))?
                    .iter()
                    .map(parse_entry)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::from_upper(n, d, kind, upper, x).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::MalformedGraph(msg),
            other => other,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Graph> {
        Graph::from_json_value(&serde_json::from_str(s)?)
    }
}

impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(ser)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 3-node path 0—1—2 with weights 1, 2 and features (10), (20), (30).
    fn path3() -> Graph {
        Graph::from_upper(
            3,
            1,
            ScalarKind::Rational,
            vec![Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(2)],
            vec![
                vec![Scalar::from_int(10)],
                vec![Scalar::from_int(20)],
                vec![Scalar::from_int(30)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn upper_triangle_layout_is_row_major() {
        let g = path3();
        assert_eq!(*g.w(0, 1), Scalar::from_int(1));
        assert_eq!(*g.w(0, 2), Scalar::from_int(0));
        assert_eq!(*g.w(1, 2), Scalar::from_int(2));
        assert_eq!(*g.w(2, 1), Scalar::from_int(2));
        assert!(g.w(1, 1).is_zero());
    }

    #[test]
    fn relabeling_permutes_rows_and_features() {
        // Swap nodes 1 and 2: new (0,1) entry reads old (0,2).
        let g = path3();
        let p = Permutation::transposition(3, 1, 2).unwrap();
        let h = g.apply_iwfp(&p).unwrap();
        assert_eq!(*h.w(0, 1), Scalar::from_int(0));
        assert_eq!(*h.w(0, 2), Scalar::from_int(1));
        assert_eq!(*h.w(1, 2), Scalar::from_int(2));
        assert_eq!(h.x_row(1), &[Scalar::from_int(30)]);
        assert_eq!(h.x_row(2), &[Scalar::from_int(20)]);
    }

    #[test]
    fn relabeling_by_identity_is_identity() {
        let g = path3();
        assert_eq!(g.apply_iwfp(&Permutation::identity(3)).unwrap(), g);
    }

    #[test]
    fn composition_is_contravariant() {
        // Relabeling by p1 then p2 equals relabeling by p1 ∘ p2.
        let g = path3();
        let p1 = Permutation::from_image(vec![1, 2, 0]).unwrap();
        let p2 = Permutation::transposition(3, 0, 1).unwrap();
        let seq = g.apply_iwfp(&p1).unwrap().apply_iwfp(&p2).unwrap();
        let joint = g.apply_iwfp(&p1.compose(&p2).unwrap()).unwrap();
        assert_eq!(seq, joint);
    }

    #[test]
    fn json_round_trips_rationals_exactly() {
        let g = Graph::from_upper(
            3,
            2,
            ScalarKind::Rational,
            vec![Scalar::ratio(1, 3), Scalar::from_int(0), Scalar::ratio(7, 2)],
            vec![
                vec![Scalar::from_int(1), Scalar::ratio(-2, 5)],
                vec![Scalar::from_int(0), Scalar::from_int(0)],
                vec![Scalar::ratio(9, 4), Scalar::from_int(3)],
            ],
        )
        .unwrap();
        let back = Graph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_round_trips_floats() {
        let g = Graph::from_upper(
            2,
            1,
            ScalarKind::Float,
            vec![Scalar::Float(0.125)],
            vec![vec![Scalar::Float(1.5)], vec![Scalar::Float(-2.25)]],
        )
        .unwrap();
        let back = Graph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_rejects_schema_violations() {
        // Upper triangle too short.
        let bad = r#"{"n": 3, "d": 0, "scalar": "rational", "w_upper": ["1"], "x": [[],[],[]]}"#;
        assert!(matches!(
            Graph::from_json_str(bad),
            Err(Error::MalformedGraph(_))
        ));
        // Non-integer number in rational mode would be lossy.
        let lossy =
            r#"{"n": 2, "d": 0, "scalar": "rational", "w_upper": [0.5], "x": [[],[]]}"#;
        assert!(Graph::from_json_str(lossy).is_err());
        // Mixed kinds: float entry in rational mode as a string is fine, but
        // a string in float mode is not.
        let mixed = r#"{"n": 2, "d": 0, "scalar": "float", "w_upper": ["1/2"], "x": [[],[]]}"#;
        assert!(Graph::from_json_str(mixed).is_err());
    }

    #[test]
    fn from_matrix_validates_shape() {
        let z = || Scalar::from_int(0);
        let one = || Scalar::from_int(1);
        // Asymmetric.
        let bad = vec![
            vec![z(), one(), z()],
            vec![z(), z(), z()],
            vec![z(), z(), z()],
        ];
        assert!(Graph::from_matrix(bad, vec![vec![], vec![], vec![]]).is_err());
        // Nonzero diagonal.
        let bad2 = vec![vec![one(), z()], vec![z(), z()]];
        assert!(Graph::from_matrix(bad2, vec![vec![], vec![]]).is_err());
    }
}
