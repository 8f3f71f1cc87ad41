//! Node permutations and their enumeration.
//!
//! A permutation over `n` nodes is stored as its image vector: `image[i]`
//! is where node `i` is sent. Full enumeration of all `n!` permutations is
//! deliberately capped ([`DEFAULT_PERM_CAP`]); callers that need larger `n`
//! must opt in explicitly, and everything built on enumeration (orbits,
//! exhaustive checks) inherits the cap.

use crate::{Error, Result};
use itertools::Itertools;

/// Largest `n` for which `enumerate_sn` runs without an explicit override
/// (8! = 40320 permutations).
pub const DEFAULT_PERM_CAP: usize = 8;

/// A permutation of `{0, ..., n-1}`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// The identity on `n` nodes.
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// The transposition of `a` and `b` on `n` nodes.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::invalid(format!(
                "transposition ({a},{b}) out of range for n={n}"
            )));
        }
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Ok(Permutation { image })
    }

    /// Build from an explicit image vector; must be a bijection.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::invalid(format!("not a permutation: {image:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// Where node `i` is sent.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// The image vector.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Composition `self ∘ other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::invalid(format!(
                "composing permutations of sizes {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(Permutation {
            image: (0..self.n()).map(|i| self.apply(other.apply(i))).collect(),
        })
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.image.iter().join(", "))
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.image.serialize(ser)
    }
}

/// All permutations of `n` nodes in lexicographic image order, starting with
/// the identity. Errors above the cap.
pub fn enumerate_sn_with_cap(n: usize, cap: usize) -> Result<Vec<Permutation>> {
    if n > cap {
        return Err(Error::PermCapExceeded { n, cap });
    }
    Ok((0..n)
        .permutations(n)
        .map(|image| Permutation { image })
        .collect())
}

/// [`enumerate_sn_with_cap`] at the default cap.
pub fn enumerate_sn(n: usize) -> Result<Vec<Permutation>> {
    enumerate_sn_with_cap(n, DEFAULT_PERM_CAP)
}

/// All permutations of `n` nodes that fix node `fixed`, lexicographic,
/// `(n-1)!` of them.
pub fn enumerate_stabilizer(n: usize, fixed: usize) -> Result<Vec<Permutation>> {
    if fixed >= n {
        return Err(Error::invalid(format!(
            "stabilized node {fixed} out of range for n={n}"
        )));
    }
    Ok(enumerate_sn(n)?
        .into_iter()
        .filter(|p| p.apply(fixed) == fixed)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let s3 = enumerate_sn(3).unwrap();
        let images: Vec<&[usize]> = s3.iter().map(|p| p.image()).collect();
        assert_eq!(
            images,
            vec![
                &[0, 1, 2][..],
                &[0, 2, 1],
                &[1, 0, 2],
                &[1, 2, 0],
                &[2, 0, 1],
                &[2, 1, 0]
            ]
        );
        assert!(s3[0].is_identity());
    }

    #[test]
    fn enumeration_respects_cap() {
        assert!(matches!(
            enumerate_sn_with_cap(5, 4),
            Err(Error::PermCapExceeded { n: 5, cap: 4 })
        ));
        assert_eq!(enumerate_sn(4).unwrap().len(), 24);
    }

    #[test]
    fn stabilizer_has_factorial_size_and_fixes_the_node() {
        let st = enumerate_stabilizer(4, 2).unwrap();
        assert_eq!(st.len(), 6);
        assert!(st.iter().all(|p| p.apply(2) == 2));
    }

    #[test]
    fn compose_applies_right_operand_first() {
        // p1 = (0 1), p2 = (1 2) on three nodes.
        let p1 = Permutation::transposition(3, 0, 1).unwrap();
        let p2 = Permutation::transposition(3, 1, 2).unwrap();
        let c = p1.compose(&p2).unwrap();
        // (p1 ∘ p2)(1) = p1(2) = 2, (p1 ∘ p2)(2) = p1(1) = 0.
        assert_eq!(c.image(), &[1, 2, 0]);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::from_image(vec![2, 0, 3, 1]).unwrap();
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(p.inverse().compose(&p).unwrap().is_identity());
    }

    #[test]
    fn from_image_rejects_non_bijections() {
        assert!(Permutation::from_image(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_image(vec![0, 3, 1]).is_err());
    }
}
