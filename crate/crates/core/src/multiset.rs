//! Multisets of scalar vectors with order-independent equality.
//!
//! Elements are stored sorted under the total scalar order, so two multisets
//! built from the same elements in different orders compare equal, and the
//! derived `Ord` gives every multiset a canonical position in sorted
//! containers.

use crate::scalar::Scalar;
use std::fmt;

/// A finite multiset of equal-length scalar vectors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset {
    elems: Vec<Vec<Scalar>>,
}

impl Multiset {
    /// Multiset of vectors; elements may repeat and arrive in any order.
    pub fn from_vectors(mut elems: Vec<Vec<Scalar>>) -> Self {
        elems.sort();
        Multiset { elems }
    }

    /// Multiset of scalars, stored as 1-vectors.
    pub fn from_scalars(elems: Vec<Scalar>) -> Self {
        Multiset::from_vectors(elems.into_iter().map(|s| vec![s]).collect())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Elements in canonical (sorted) order.
    pub fn elements(&self) -> &[Vec<Scalar>] {
        &self.elems
    }

    /// Multiplicity of one vector.
    pub fn count_of(&self, v: &[Scalar]) -> usize {
        self.elems.iter().filter(|e| e.as_slice() == v).count()
    }

    /// Canonical element order as an iterator over scalar slices.
    pub fn iter(&self) -> impl Iterator<Item = &[Scalar]> {
        self.elems.iter().map(|v| v.as_slice())
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elems.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if e.len() == 1 {
                write!(f, "{}", e[0])?;
            } else {
                write!(f, "(")?;
                for (t, s) in e.iter().enumerate() {
                    if t > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")?;
            }
        }
        write!(f, "}}")
    }
}

impl serde::Serialize for Multiset {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = ser.serialize_seq(Some(self.elems.len()))?;
        for e in &self.elems {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn ints(vs: &[i64]) -> Multiset {
        Multiset::from_scalars(vs.iter().map(|v| Scalar::from_int(*v)).collect())
    }

    #[test]
    fn equality_ignores_insertion_order() {
        assert_eq!(ints(&[3, 1, 2]), ints(&[2, 3, 1]));
        assert_ne!(ints(&[1, 2, 2]), ints(&[1, 1, 2]));
    }

    #[test]
    fn multiplicities_matter() {
        assert_ne!(ints(&[1, 1]), ints(&[1]));
        assert_eq!(ints(&[5, 5, 7]).count_of(&[Scalar::from_int(5)]), 2);
    }

    #[test]
    fn equal_sums_do_not_imply_equal_multisets() {
        // The standard counterexample used throughout the encoder tests.
        assert_ne!(ints(&[2, 5]), ints(&[3, 4]));
    }

    #[test]
    fn display_is_sorted() {
        assert_eq!(ints(&[3, 1, 2]).to_string(), "{1, 2, 3}");
    }
}
