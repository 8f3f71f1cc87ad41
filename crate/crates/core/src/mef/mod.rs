//! Multiset encoders: maps `psi` on vectors such that the *sum* of encoded
//! values determines the multiset of inputs exactly.
//!
//! Two constructions have this property for multisets of a fixed size `n`:
//!
//! - **scalar-power** (`m = 1`): `psi(v) = (v, v^2, ..., v^n)`. The sums are
//!   the power sums of the multiset, which determine it via Newton's
//!   identities.
//! - **complex-tensor** (`m >= 2`): for every ordered coordinate pair
//!   `(r, s)` with `r < s` and every exponent `l <= n`, store the real part
//!   of `(v_r + i v_s)^l` in slot `(l, r, s)` and the imaginary part in slot
//!   `(l, s, r)`; diagonal slots are zero. Summing gives complex power sums
//!   of every coordinate pair, which determine each pairwise projection.
//!
//! A plain identity map is also provided as a deliberate **non**-example:
//! summing inputs loses everything beyond the mean, and the tests use it as
//! a negative control.
//!
//! Everything here is exact-rational only. The decoders factor monic
//! polynomials built from the sums; "these sums do not come from a rational
//! multiset" is an ordinary outcome, not an error.

pub mod gauss;
pub mod newton;

use crate::multiset::Multiset;
use crate::scalar::{Scalar, ScalarKind};
use crate::{Error, Result};
use gauss::GaussianRational;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Which construction an encoder uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncoderKind {
    ScalarPower,
    ComplexTensor,
    /// Plain identity — sums are *not* injective on multisets. Negative
    /// control for tests and demos.
    Identity,
}

/// An encoder for multisets of exactly `n` vectors of dimension `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MefEncoder {
    kind: EncoderKind,
    m: usize,
    n: usize,
}

/// Result of decoding scalar power sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    /// The sums are the power sums of this (unique) rational multiset.
    Decoded(Multiset),
    /// No rational multiset has these power sums.
    NotRationalRoots,
}

/// Decoded pairwise projections of a complex-tensor sum.
#[derive(Debug, Clone, Serialize)]
pub struct PairwiseDecode {
    /// One entry per coordinate pair `(r, s)`, `r < s`, in row-major order.
    pub per_pair: Vec<PairProjection>,
    pub outcome: PairwiseOutcome,
}

/// The multiset of `(v_r, v_s)` pairs recovered for one coordinate pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairProjection {
    pub r: usize,
    pub s: usize,
    /// Sorted list of `(v_r, v_s)` values, one per multiset element.
    pub pairs: Vec<(Scalar, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PairwiseOutcome {
    /// Every pair decoded and every coordinate's multiset agrees across all
    /// pairs that contain it.
    Consistent,
    /// Some pair's power sums do not come from a Gaussian-rational multiset.
    NotRationalRoots { r: usize, s: usize },
    /// Two pairs disagree about the multiset of one coordinate — the sums
    /// cannot all come from one multiset of vectors.
    Inconsistent { coordinate: usize },
}

impl MefEncoder {
    /// Scalar-power encoder for multisets of `n` scalars.
    pub fn scalar_power(n: usize) -> Result<MefEncoder> {
        if n == 0 {
            return Err(Error::invalid("encoder needs multiset size n >= 1"));
        }
        Ok(MefEncoder {
            kind: EncoderKind::ScalarPower,
            m: 1,
            n,
        })
    }

    /// Complex-tensor encoder for multisets of `n` vectors of dimension
    /// `m >= 2`.
    pub fn complex_tensor(m: usize, n: usize) -> Result<MefEncoder> {
        if m < 2 {
            return Err(Error::invalid(
                "complex-tensor encoder needs dimension m >= 2 (use scalar-power for m = 1)",
            ));
        }
        if n == 0 {
            return Err(Error::invalid("encoder needs multiset size n >= 1"));
        }
        Ok(MefEncoder {
            kind: EncoderKind::ComplexTensor,
            m,
            n,
        })
    }

    /// The identity "encoder" — a negative control whose sums are not
    /// injective on multisets.
    pub fn identity(m: usize, n: usize) -> Result<MefEncoder> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("identity encoder needs m >= 1, n >= 1"));
        }
        Ok(MefEncoder {
            kind: EncoderKind::Identity,
            m,
            n,
        })
    }

    pub fn kind(&self) -> EncoderKind {
        self.kind
    }

    /// Input vector dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Multiset size the encoder is calibrated for.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Output dimension of `encode`.
    pub fn out_dim(&self) -> usize {
        match self.kind {
            EncoderKind::ScalarPower => self.n,
            EncoderKind::ComplexTensor => self.m * self.m * self.n,
            EncoderKind::Identity => self.m,
        }
    }

    /// Whether the sum of encodings determines the multiset (false only for
    /// the identity control).
    pub fn is_sum_decodable(&self) -> bool {
        !matches!(self.kind, EncoderKind::Identity)
    }

    /// Flat index of complex-tensor slot `(l, r, s)`, `l` counted from 1.
    pub fn slot(&self, l: usize, r: usize, s: usize) -> usize {
        debug_assert!(matches!(self.kind, EncoderKind::ComplexTensor));
        (l - 1) * self.m * self.m + r * self.m + s
    }

    /// Encode one vector. Exact-rational input only.
    pub fn encode(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.m {
            return Err(Error::invalid(format!(
                "encoder expects vectors of dimension {}, got {}",
                self.m,
                v.len()
            )));
        }
        let mut rat = Vec::with_capacity(self.m);
        for s in v {
            rat.push(s.as_rational("multiset encoding")?.clone());
        }
        let out = match self.kind {
            EncoderKind::Identity => rat,
            EncoderKind::ScalarPower => {
                let mut out = Vec::with_capacity(self.n);
                let mut acc = BigRational::from_integer(1.into());
                for _ in 0..self.n {
                    acc *= &rat[0];
                    out.push(acc.clone());
                }
                out
            }
            EncoderKind::ComplexTensor => {
                let mut out = vec![BigRational::zero(); self.out_dim()];
                for r in 0..self.m {
                    for s in (r + 1)..self.m {
                        let z = GaussianRational::new(rat[r].clone(), rat[s].clone());
                        let mut acc = GaussianRational::one();
                        for l in 1..=self.n {
                            acc = acc.mul(&z);
                            out[self.slot(l, r, s)] = acc.re.clone();
                            out[self.slot(l, s, r)] = acc.im.clone();
                        }
                    }
                }
                out
            }
        };
        Ok(out.into_iter().map(Scalar::Rational).collect())
    }

    /// Componentwise sum of the encodings of exactly `n` vectors — the value
    /// an order-invariant aggregator would see.
    pub fn sum_encode(&self, vectors: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
        if vectors.len() != self.n {
            return Err(Error::invalid(format!(
                "encoder is calibrated for multisets of exactly {} vectors, got {}",
                self.n,
                vectors.len()
            )));
        }
        let mut acc = vec![Scalar::zero(ScalarKind::Rational); self.out_dim()];
        for v in vectors {
            let enc = self.encode(v)?;
            for (a, e) in acc.iter_mut().zip(enc) {
                *a = &*a + &e;
            }
        }
        Ok(acc)
    }

    /// Invert a scalar-power sum: recover the multiset whose power sums
    /// these are, or report that no rational multiset fits.
    pub fn decode_scalar(&self, sums: &[Scalar]) -> Result<DecodeOutcome> {
        if !matches!(self.kind, EncoderKind::ScalarPower) {
            return Err(Error::invalid(
                "decode_scalar applies to scalar-power encoders only",
            ));
        }
        if sums.len() != self.n {
            return Err(Error::invalid(format!(
                "expected {} power sums, got {}",
                self.n,
                sums.len()
            )));
        }
        let p: Vec<BigRational> = sums
            .iter()
            .map(|s| s.as_rational("power-sum decoding").cloned())
            .collect::<Result<_>>()?;
        let poly = newton::elementary_to_monic(&newton::power_sums_to_elementary(&p));
        Ok(match newton::rational_roots_monic(&poly) {
            Some(roots) => DecodeOutcome::Decoded(Multiset::from_scalars(
                roots.into_iter().map(Scalar::Rational).collect(),
            )),
            None => DecodeOutcome::NotRationalRoots,
        })
    }

    /// Decode every pairwise projection of a complex-tensor sum and check
    /// that overlapping projections agree. This is the only supported
    /// diagnostic for multi-dimensional sums; it does not reassemble full
    /// vectors.
    pub fn decode_pairwise(&self, sums: &[Scalar]) -> Result<PairwiseDecode> {
        if !matches!(self.kind, EncoderKind::ComplexTensor) {
            return Err(Error::invalid(
                "decode_pairwise applies to complex-tensor encoders only",
            ));
        }
        if sums.len() != self.out_dim() {
            return Err(Error::invalid(format!(
                "expected {} summed slots, got {}",
                self.out_dim(),
                sums.len()
            )));
        }
        let rat: Vec<BigRational> = sums
            .iter()
            .map(|s| s.as_rational("pairwise decoding").cloned())
            .collect::<Result<_>>()?;

        let mut per_pair = Vec::new();
        for r in 0..self.m {
            for s in (r + 1)..self.m {
                let p: Vec<GaussianRational> = (1..=self.n)
                    .map(|l| {
                        GaussianRational::new(
                            rat[self.slot(l, r, s)].clone(),
                            rat[self.slot(l, s, r)].clone(),
                        )
                    })
                    .collect();
                let poly = newton::elementary_to_monic_gauss(
                    &newton::power_sums_to_elementary_gauss(&p),
                );
                match gauss::gaussian_roots_monic(&poly) {
                    Some(roots) => {
                        let mut pairs: Vec<(Scalar, Scalar)> = roots
                            .into_iter()
                            .map(|z| (Scalar::Rational(z.re), Scalar::Rational(z.im)))
                            .collect();
                        pairs.sort();
                        per_pair.push(PairProjection { r, s, pairs });
                    }
                    None => {
                        return Ok(PairwiseDecode {
                            per_pair,
                            outcome: PairwiseOutcome::NotRationalRoots { r, s },
                        })
                    }
                }
            }
        }

        // Each coordinate appears in m-1 projections; they must all report
        // the same multiset for it.
        for t in 0..self.m {
            let mut seen: Option<Multiset> = None;
            for proj in &per_pair {
                let vals: Option<Vec<Scalar>> = if proj.r == t {
                    Some(proj.pairs.iter().map(|(a, _)| a.clone()).collect())
                } else if proj.s == t {
                    Some(proj.pairs.iter().map(|(_, b)| b.clone()).collect())
                } else {
                    None
                };
                if let Some(vals) = vals {
                    let ms = Multiset::from_scalars(vals);
                    match &seen {
                        None => seen = Some(ms),
                        Some(prev) if *prev != ms => {
                            return Ok(PairwiseDecode {
                                per_pair,
                                outcome: PairwiseOutcome::Inconsistent { coordinate: t },
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(PairwiseDecode {
            per_pair,
            outcome: PairwiseOutcome::Consistent,
        })
    }

    /// The multiset of one coordinate according to a consistent pairwise
    /// decode (first projection containing it).
    pub fn coordinate_multiset(decode: &PairwiseDecode, t: usize) -> Option<Multiset> {
        for proj in &decode.per_pair {
            if proj.r == t {
                return Some(Multiset::from_scalars(
                    proj.pairs.iter().map(|(a, _)| a.clone()).collect(),
                ));
            }
            if proj.s == t {
                return Some(Multiset::from_scalars(
                    proj.pairs.iter().map(|(_, b)| b.clone()).collect(),
                ));
            }
        }
        None
    }
}

/// Outcome of a randomized check of the defining property: equal sums of
/// encodings if and only if equal multisets.
#[derive(Debug, Clone, Serialize)]
pub struct MefPropertyReport {
    pub kind: EncoderKind,
    pub m: usize,
    pub n: usize,
    pub out_dim: usize,
    pub trials: usize,
    pub violations: usize,
    pub first_violation: Option<MefViolation>,
    pub passed: bool,
}

/// A concrete pair witnessing a violation of the iff.
#[derive(Debug, Clone, Serialize)]
pub struct MefViolation {
    pub lhs: Vec<Vec<Scalar>>,
    pub rhs: Vec<Vec<Scalar>>,
    pub sums_equal: bool,
    pub multisets_equal: bool,
}

/// Randomized verification of "sum of encodings equal iff multisets equal".
///
/// Trials rotate through three pair constructions: equal multisets in
/// shuffled order, sum-preserving perturbations (plain componentwise sums
/// match but the multisets differ — the pairs that defeat the identity
/// control), and independent samples. The first trials are fixed engineered
/// collisions such as {2, 5} vs {3, 4}.
pub fn verify_mef_property(enc: &MefEncoder, trials: usize, seed: u64) -> Result<MefPropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut first_violation = None;

    let mut record = |enc: &MefEncoder,
                      lhs: &[Vec<Scalar>],
                      rhs: &[Vec<Scalar>]|
     -> Result<()> {
        let sums_equal = enc.sum_encode(lhs)? == enc.sum_encode(rhs)?;
        let multisets_equal =
            Multiset::from_vectors(lhs.to_vec()) == Multiset::from_vectors(rhs.to_vec());
        if sums_equal != multisets_equal {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(MefViolation {
                    lhs: lhs.to_vec(),
                    rhs: rhs.to_vec(),
                    sums_equal,
                    multisets_equal,
                });
            }
        }
        Ok(())
    };

    let m = enc.m();
    let n = enc.n();
    let sample_vec = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
        (0..m)
            .map(|_| Scalar::ratio(rng.gen_range(-10..=10), 2))
            .collect()
    };
    let sample_multiset =
        |rng: &mut ChaCha8Rng| -> Vec<Vec<Scalar>> { (0..n).map(|_| sample_vec(rng)).collect() };

    // Engineered collision: {2, 5, 0, ...} vs {3, 4, 0, ...} (constant
    // vectors). Equal plain sums, different multisets.
    if n >= 2 {
        let constv = |v: i64| vec![Scalar::from_int(v); m];
        let mut lhs = vec![constv(2), constv(5)];
        let mut rhs = vec![constv(3), constv(4)];
        lhs.resize(n, constv(0));
        rhs.resize(n, constv(0));
        record(enc, &lhs, &rhs)?;
    }

    for t in 0..trials {
        let lhs = sample_multiset(&mut rng);
        match t % 3 {
            0 => {
                // Equal multisets, shuffled order.
                let mut rhs = lhs.clone();
                for i in (1..rhs.len()).rev() {
                    rhs.swap(i, rng.gen_range(0..=i));
                }
                record(enc, &lhs, &rhs)?;
            }
            1 if n >= 2 => {
                // Sum-preserving perturbation: move delta from one element
                // to another in one coordinate.
                let mut rhs = lhs.clone();
                let c = rng.gen_range(0..m);
                let delta = Scalar::from_int(rng.gen_range(1..=3));
                rhs[0][c] = &rhs[0][c] + &delta;
                rhs[1][c] = &rhs[1][c] - &delta;
                record(enc, &lhs, &rhs)?;
            }
            _ => {
                let rhs = sample_multiset(&mut rng);
                record(enc, &lhs, &rhs)?;
            }
        }
    }

    Ok(MefPropertyReport {
        kind: enc.kind(),
        m,
        n,
        out_dim: enc.out_dim(),
        trials,
        violations,
        first_violation,
        passed: violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn scalar_power_encoding_lists_powers() {
        let enc = MefEncoder::scalar_power(3).unwrap();
        assert_eq!(
            enc.encode(&[int(2)]).unwrap(),
            vec![int(2), int(4), int(8)]
        );
        assert_eq!(enc.out_dim(), 3);
    }

    #[test]
    fn complex_tensor_encoding_fills_offdiagonal_slots() {
        // v = (1, 2), n = 2: (1 + 2i)^1 = 1 + 2i, (1 + 2i)^2 = -3 + 4i.
        // Layout per exponent: [(0,0), (0,1)=Re, (1,0)=Im, (1,1)].
        let enc = MefEncoder::complex_tensor(2, 2).unwrap();
        assert_eq!(
            enc.encode(&[int(1), int(2)]).unwrap(),
            vec![
                int(0),
                int(1),
                int(2),
                int(0),
                int(0),
                int(-3),
                int(4),
                int(0)
            ]
        );
        assert_eq!(enc.out_dim(), 8);
    }

    #[test]
    fn sum_encode_is_order_invariant_and_counts_elements() {
        let enc = MefEncoder::scalar_power(3).unwrap();
        let a = vec![vec![int(1)], vec![int(2)], vec![int(5)]];
        let b = vec![vec![int(5)], vec![int(1)], vec![int(2)]];
        assert_eq!(enc.sum_encode(&a).unwrap(), enc.sum_encode(&b).unwrap());
        // Wrong multiset size is a usage error.
        assert!(enc.sum_encode(&a[..2].to_vec()).is_err());
    }

    #[test]
    fn encode_rejects_floats_and_bad_dims() {
        let enc = MefEncoder::scalar_power(2).unwrap();
        assert!(matches!(
            enc.encode(&[Scalar::Float(1.0)]),
            Err(Error::ExactRequired { .. })
        ));
        assert!(enc.encode(&[int(1), int(2)]).is_err());
    }

    #[test]
    fn scalar_decode_round_trips_and_flags_irrational_sums() {
        let enc = MefEncoder::scalar_power(3).unwrap();
        let ms = vec![vec![int(-2)], vec![int(7)], vec![int(7)]];
        let sums = enc.sum_encode(&ms).unwrap();
        match enc.decode_scalar(&sums).unwrap() {
            DecodeOutcome::Decoded(got) => {
                assert_eq!(got, Multiset::from_vectors(ms));
            }
            DecodeOutcome::NotRationalRoots => panic!("round trip failed"),
        }
        // Power sums of {sqrt(2), -sqrt(2), 0} are rational but decode to
        // no rational multiset.
        let enc2 = MefEncoder::scalar_power(2).unwrap();
        let bad = vec![int(0), int(4)];
        assert_eq!(
            enc2.decode_scalar(&bad).unwrap(),
            DecodeOutcome::NotRationalRoots
        );
    }

    #[test]
    fn pairwise_decode_recovers_projections() {
        let enc = MefEncoder::complex_tensor(2, 2).unwrap();
        let ms = vec![vec![int(1), int(2)], vec![int(3), int(4)]];
        let sums = enc.sum_encode(&ms).unwrap();
        let dec = enc.decode_pairwise(&sums).unwrap();
        assert_eq!(dec.outcome, PairwiseOutcome::Consistent);
        assert_eq!(dec.per_pair.len(), 1);
        assert_eq!(
            dec.per_pair[0].pairs,
            vec![(int(1), int(2)), (int(3), int(4))]
        );
        assert_eq!(
            MefEncoder::coordinate_multiset(&dec, 0).unwrap(),
            Multiset::from_scalars(vec![int(1), int(3)])
        );
        assert_eq!(
            MefEncoder::coordinate_multiset(&dec, 1).unwrap(),
            Multiset::from_scalars(vec![int(2), int(4)])
        );
    }

    #[test]
    fn pairwise_decode_detects_cross_pair_inconsistency() {
        // Take sums from two different multisets and splice them: pair
        // (0,1) from one, pairs (0,2) and (1,2) from another that disagrees
        // about coordinate 0's multiset.
        let enc = MefEncoder::complex_tensor(3, 2).unwrap();
        let a = vec![vec![int(1), int(2), int(3)], vec![int(4), int(5), int(6)]];
        let b = vec![vec![int(9), int(2), int(3)], vec![int(8), int(5), int(6)]];
        let sa = enc.sum_encode(&a).unwrap();
        let sb = enc.sum_encode(&b).unwrap();
        let mut spliced = sb.clone();
        for l in 1..=2 {
            spliced[enc.slot(l, 0, 1)] = sa[enc.slot(l, 0, 1)].clone();
            spliced[enc.slot(l, 1, 0)] = sa[enc.slot(l, 1, 0)].clone();
        }
        let dec = enc.decode_pairwise(&spliced).unwrap();
        assert_eq!(dec.outcome, PairwiseOutcome::Inconsistent { coordinate: 0 });
    }

    #[test]
    fn property_check_passes_for_real_encoders() {
        let enc = MefEncoder::scalar_power(3).unwrap();
        let report = verify_mef_property(&enc, 60, 11).unwrap();
        assert!(report.passed, "{:?}", report.first_violation);

        let enc2 = MefEncoder::complex_tensor(2, 3).unwrap();
        let report2 = verify_mef_property(&enc2, 60, 12).unwrap();
        assert!(report2.passed, "{:?}", report2.first_violation);
    }

    #[test]
    fn property_check_fails_for_identity_control() {
        // {2,...} vs {3,...} engineered collision defeats plain summing.
        let enc = MefEncoder::identity(1, 2).unwrap();
        let report = verify_mef_property(&enc, 30, 13).unwrap();
        assert!(!report.passed);
        let v = report.first_violation.unwrap();
        assert!(v.sums_equal && !v.multisets_equal);
    }
}
