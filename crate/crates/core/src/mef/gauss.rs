//! Exact arithmetic over the Gaussian rationals `Q(i)` and root-finding for
//! monic polynomials with Gaussian-rational coefficients.
//!
//! The complex-tensor encoder packs pairs of real coordinates into complex
//! numbers; decoding its sums means factoring a monic polynomial over
//! `Q(i)`. The rational-root theorem carries over: a root `u/v` in lowest
//! terms over the Gaussian integers has `u` dividing the constant term and
//! `v` dividing the leading coefficient. Divisors of a Gaussian integer are
//! enumerated through its norm: every divisor's norm divides the norm, and
//! for a given norm there are finitely many lattice points to test. All of
//! this is exact; cost grows with the number of divisors of the norm, which
//! stays small for calibration-scale inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// An element of `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(BigRational::one(), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussianRational::new(r, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn neg(&self) -> Self {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussianRational::new(&self.re * r, &self.im * r)
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `z^k` by repeated squaring.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = GaussianRational::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Positive divisors of a nonzero integer, via trial-division factorization.
pub fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.abs();
    assert!(!m.is_zero(), "divisors of zero are undefined");
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        if (&m % &d).is_zero() {
            let mut e = 0u32;
            while (&m % &d).is_zero() {
                m /= &d;
                e += 1;
            }
            factors.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) {
            BigInt::one()
        } else {
            BigInt::from(2)
        };
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let base = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk = &pk * &p;
            divs.extend(base.iter().map(|b| b * &pk));
        }
    }
    divs.sort();
    divs
}

/// A Gaussian integer as a coordinate pair.
pub type GaussInt = (BigInt, BigInt);

/// Whether `d` divides `g` in the Gaussian integers (`d != 0`).
pub fn gauss_divides(d: &GaussInt, g: &GaussInt) -> bool {
    let n = &d.0 * &d.0 + &d.1 * &d.1;
    assert!(!n.is_zero(), "division by zero Gaussian integer");
    // g / d = g * conj(d) / N(d); both components must be divisible by N(d).
    let re = &g.0 * &d.0 + &g.1 * &d.1;
    let im = &g.1 * &d.0 - &g.0 * &d.1;
    (&re % &n).is_zero() && (&im % &n).is_zero()
}

/// Divisors of a nonzero Gaussian integer, one representative per associate
/// class, normalized to the quarter-plane `re > 0, im >= 0`.
pub fn gauss_divisors_up_to_units(g: &GaussInt) -> Vec<GaussInt> {
    let norm = &g.0 * &g.0 + &g.1 * &g.1;
    let mut out: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
    for m in positive_divisors(&norm) {
        // Lattice points a^2 + b^2 = m with a > 0, b >= 0 cover every
        // associate class of norm m exactly once (rotate by i as needed).
        let mut a = BigInt::one();
        while &a * &a <= m {
            let b2 = &m - &a * &a;
            let b = b2.sqrt();
            if &b * &b == b2 {
                let cand = (a.clone(), b);
                if gauss_divides(&cand, g) {
                    out.insert(cand);
                }
            }
            a += BigInt::one();
        }
    }
    out.into_iter().collect()
}

/// All roots in `Q(i)` of a monic polynomial, with multiplicity, or `None`
/// if the polynomial does not split over `Q(i)`.
///
/// `coeffs` lists coefficients from the constant term upward and must end
/// with 1 (monic). Returns the roots in the order found (deterministic:
/// candidates are scanned in sorted order).
pub fn gaussian_roots_monic(coeffs: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    assert!(
        coeffs.last().map_or(false, |c| *c == GaussianRational::one()),
        "polynomial must be monic"
    );
    let mut poly: Vec<GaussianRational> = coeffs.to_vec();
    let mut roots = Vec::new();

    // Zero roots first so the divisor machinery sees a nonzero constant term.
    while poly.len() > 1 && poly[0].is_zero() {
        roots.push(GaussianRational::zero());
        poly.remove(0);
    }
    if poly.len() == 1 {
        return Some(roots);
    }

    let candidates = root_candidates(&poly);
    while poly.len() > 1 {
        let mut hit = None;
        for z in &candidates {
            if eval(&poly, z).is_zero() {
                hit = Some(z.clone());
                break;
            }
        }
        // A root of any deflated quotient is a root of the original
        // polynomial, so the initial candidate set stays sufficient.
        match hit {
            Some(z) => {
                poly = deflate(&poly, &z);
                roots.push(z);
            }
            None => return None,
        }
    }
    Some(roots)
}

/// Candidate roots `u/v` by the rational-root theorem over `Z[i]`: clear
/// denominators, then `u` ranges over divisors of the constant term (times
/// the four units) and `v` over divisors of the leading integer.
fn root_candidates(poly: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut lcm = BigInt::one();
    for c in poly {
        lcm = lcm.lcm(c.re.denom());
        lcm = lcm.lcm(c.im.denom());
    }
    let l = BigRational::from_integer(lcm.clone());
    let to_int = |c: &GaussianRational| -> GaussInt {
        let re = &c.re * &l;
        let im = &c.im * &l;
        (re.to_integer(), im.to_integer())
    };
    let a0 = to_int(&poly[0]);
    debug_assert!(!(a0.0.is_zero() && a0.1.is_zero()), "zero roots stripped");
    let units: [GaussInt; 4] = [
        (BigInt::one(), BigInt::zero()),
        (-BigInt::one(), BigInt::zero()),
        (BigInt::zero(), BigInt::one()),
        (BigInt::zero(), -BigInt::one()),
    ];
    let mut set: BTreeSet<GaussianRational> = BTreeSet::new();
    for num in gauss_divisors_up_to_units(&a0) {
        for den in gauss_divisors_up_to_units(&(lcm.clone(), BigInt::zero())) {
            let dn = &den.0 * &den.0 + &den.1 * &den.1;
            // num * conj(den) / N(den), then times each unit.
            let re = BigRational::new(&num.0 * &den.0 + &num.1 * &den.1, dn.clone());
            let im = BigRational::new(&num.1 * &den.0 - &num.0 * &den.1, dn.clone());
            let base = GaussianRational::new(re, im);
            for (ur, ui) in &units {
                let u = GaussianRational::new(
                    BigRational::from_integer(ur.clone()),
                    BigRational::from_integer(ui.clone()),
                );
                set.insert(base.mul(&u));
            }
        }
    }
    set.into_iter().collect()
}

/// Horner evaluation.
fn eval(poly: &[GaussianRational], z: &GaussianRational) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for c in poly.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// Synthetic division of a monic polynomial by `(x - z)`; `z` must be a
/// root, so the remainder vanishes and the quotient stays monic.
fn deflate(poly: &[GaussianRational], z: &GaussianRational) -> Vec<GaussianRational> {
    let k = poly.len() - 1;
    let mut q = vec![GaussianRational::zero(); k];
    q[k - 1] = poly[k].clone();
    for i in (1..k).rev() {
        q[i - 1] = poly[i].add(&z.mul(&q[i]));
    }
    debug_assert!(poly[0].add(&z.mul(&q[0])).is_zero(), "z must be a root");
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    #[test]
    fn positive_divisors_are_complete_and_sorted() {
        let divs: Vec<i64> = positive_divisors(&BigInt::from(60))
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect();
        assert_eq!(divs, vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
        assert_eq!(positive_divisors(&BigInt::from(-7)).len(), 2);
    }

    #[test]
    fn gaussian_divisors_of_five() {
        // 5 = (2+i)(2-i); up to units: 1, 1+2i, 2+i, 5.
        let divs = gauss_divisors_up_to_units(&(BigInt::from(5), BigInt::zero()));
        let as_i64: Vec<(i64, i64)> = divs
            .iter()
            .map(|(a, b)| (i64::try_from(a).unwrap(), i64::try_from(b).unwrap()))
            .collect();
        assert_eq!(as_i64, vec![(1, 0), (1, 2), (2, 1), (5, 0)]);
    }

    #[test]
    fn roots_of_expanded_quadratic_are_recovered() {
        // (x - (1+2i)) (x - (3-i)) = x^2 - (4+i)x + (5+5i).
        let poly = vec![gi(5, 5), gi(-4, -1), gi(1, 0)];
        let mut roots = gaussian_roots_monic(&poly).unwrap();
        roots.sort();
        assert_eq!(roots, vec![gi(1, 2), gi(3, -1)]);
    }

    #[test]
    fn repeated_and_zero_roots_are_reported_with_multiplicity() {
        // x^2 (x - i)^2 = x^4 - 2i x^3 - x^2.
        let poly = vec![gi(0, 0), gi(0, 0), gi(-1, 0), gi(0, -2), gi(1, 0)];
        let mut roots = gaussian_roots_monic(&poly).unwrap();
        roots.sort();
        assert_eq!(roots, vec![gi(0, 0), gi(0, 0), gi(0, 1), gi(0, 1)]);
    }

    #[test]
    fn fractional_gaussian_roots_are_found() {
        // (x - 1/2)(x - (1+i)/3) — roots with denominators 2 and 3.
        let half = GaussianRational::new(BigRational::new(1.into(), 2.into()), BigRational::zero());
        let third = GaussianRational::new(
            BigRational::new(1.into(), 3.into()),
            BigRational::new(1.into(), 3.into()),
        );
        let c0 = half.mul(&third);
        let c1 = half.add(&third).neg();
        let poly = vec![c0, c1, GaussianRational::one()];
        let mut roots = gaussian_roots_monic(&poly).unwrap();
        roots.sort();
        let mut want = vec![half, third];
        want.sort();
        assert_eq!(roots, want);
    }

    #[test]
    fn irrational_factors_return_none() {
        // x^2 - 2 has no roots in Q(i).
        let poly = vec![gi(-2, 0), gi(0, 0), gi(1, 0)];
        assert!(gaussian_roots_monic(&poly).is_none());
        // x^2 + 2x + 2 = (x+1)^2 + 1 has roots -1 ± i: splits over Q(i).
        let poly2 = vec![gi(2, 0), gi(2, 0), gi(1, 0)];
        let mut roots = gaussian_roots_monic(&poly2).unwrap();
        roots.sort();
        assert_eq!(roots, vec![gi(-1, -1), gi(-1, 1)]);
    }
}
