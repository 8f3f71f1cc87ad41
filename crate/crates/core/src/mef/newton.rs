//! Newton's identities: from power sums to elementary symmetric polynomials
//! to a monic polynomial whose roots are the original multiset.
//!
//! Given the first `n` power sums `p_l = sum_k v_k^l` of an unknown
//! multiset of `n` numbers, the recurrence
//! `e_r = (1/r) * sum_{i=1..r} (-1)^(i-1) e_{r-i} p_i` (with `e_0 = 1`)
//! recovers the elementary symmetric polynomials, and
//! `prod_k (x - v_k) = sum_r (-1)^r e_r x^(n-r)` turns them into a monic
//! polynomial. Factoring that polynomial (exactly) recovers the multiset.

use super::gauss::GaussianRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Elementary symmetric polynomials `e_1..e_n` from power sums `p_1..p_n`.
pub fn power_sums_to_elementary(p: &[BigRational]) -> Vec<BigRational> {
    let n = p.len();
    let mut e = vec![BigRational::one()]; // e_0
    for r in 1..=n {
        let mut acc = BigRational::zero();
        let mut sign = true;
        for i in 1..=r {
            let term = &e[r - i] * &p[i - 1];
            if sign {
                acc += term;
            } else {
                acc -= term;
            }
            sign = !sign;
        }
        e.push(acc / BigRational::from_integer(BigInt::from(r)));
    }
    e.remove(0);
    e
}

/// Coefficients (constant term first, leading 1 last) of the monic
/// polynomial with the given elementary symmetric polynomials.
pub fn elementary_to_monic(e: &[BigRational]) -> Vec<BigRational> {
    let n = e.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    for r in 1..=n {
        // coefficient of x^(n-r) is (-1)^r e_r
        let c = if r % 2 == 0 {
            e[r - 1].clone()
        } else {
            -e[r - 1].clone()
        };
        coeffs[n - r] = c;
    }
    coeffs
}

/// Same recurrence over the Gaussian rationals.
pub fn power_sums_to_elementary_gauss(p: &[GaussianRational]) -> Vec<GaussianRational> {
    let n = p.len();
    let mut e = vec![GaussianRational::one()];
    for r in 1..=n {
        let mut acc = GaussianRational::zero();
        let mut sign = true;
        for i in 1..=r {
            let term = e[r - i].mul(&p[i - 1]);
            if sign {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
            sign = !sign;
        }
        let inv_r = BigRational::new(BigInt::one(), BigInt::from(r));
        e.push(acc.scale(&inv_r));
    }
    e.remove(0);
    e
}

/// Gaussian counterpart of [`elementary_to_monic`].
pub fn elementary_to_monic_gauss(e: &[GaussianRational]) -> Vec<GaussianRational> {
    let n = e.len();
    let mut coeffs = vec![GaussianRational::zero(); n + 1];
    coeffs[n] = GaussianRational::one();
    for r in 1..=n {
        let c = if r % 2 == 0 {
            e[r - 1].clone()
        } else {
            e[r - 1].neg()
        };
        coeffs[n - r] = c;
    }
    coeffs
}

/// All rational roots of a monic polynomial with rational coefficients,
/// with multiplicity, or `None` if it does not split over `Q`. Coefficients
/// run from the constant term up and must end with 1.
pub fn rational_roots_monic(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let gcoeffs: Vec<GaussianRational> = coeffs
        .iter()
        .map(|c| GaussianRational::from_rational(c.clone()))
        .collect();
    let roots = super::gauss::gaussian_roots_monic(&gcoeffs)?;
    // A real polynomial can split over Q(i) without splitting over Q
    // (conjugate root pairs); only an all-real root list counts.
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        if !r.im.is_zero() {
            return None;
        }
        out.push(r.re);
    }
    Some(out)
}
