//! Scalar values: exact rationals or IEEE floats, never silently mixed.
//!
//! Every graph carries one scalar kind for all of its entries. Exact mode is
//! the default everywhere correctness is asserted (encoders, decoders,
//! synthesis, equality-based checks); float mode exists so the same checkers
//! can run with explicit tolerances on float data. Arithmetic between the
//! two kinds is a programming error and panics — graph constructors enforce
//! kind uniformity, so a mix can only arise from a bug inside this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Which number system a scalar (or a whole graph) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    /// Arbitrary-precision rationals; all comparisons are exact.
    Rational,
    /// `f64`; comparisons need a tolerance.
    Float,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => write!(f, "rational"),
            ScalarKind::Float => write!(f, "float"),
        }
    }
}

/// A single number of either kind.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    /// Exact integer.
    pub fn from_int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact ratio `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Additive identity of the given kind.
    pub fn zero(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Rational => Scalar::Rational(BigRational::zero()),
            ScalarKind::Float => Scalar::Float(0.0),
        }
    }

    /// Multiplicative identity of the given kind.
    pub fn one(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Rational => Scalar::Rational(BigRational::one()),
            ScalarKind::Float => Scalar::Float(1.0),
        }
    }

    /// Integer `v` represented in the given kind.
    pub fn int_of_kind(v: i64, kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Rational => Scalar::from_int(v),
            ScalarKind::Float => Scalar::Float(v as f64),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Rational(_) => ScalarKind::Rational,
            Scalar::Float(_) => ScalarKind::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Float(f) => *f < 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            Scalar::Float(f) => Scalar::Float(f.abs()),
        }
    }

    /// The underlying rational, or an error if this is a float.
    pub fn as_rational(&self, op: &'static str) -> crate::Result<&BigRational> {
        match self {
            Scalar::Rational(r) => Ok(r),
            Scalar::Float(_) => Err(crate::Error::ExactRequired { op }),
        }
    }

    /// Lossy numeric view, for display and float-mode interop.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    /// `self^k` by repeated squaring (exact in rational mode).
    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one(self.kind());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Elementwise minimum under the total order.
    pub fn min(self, other: Scalar) -> Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Elementwise maximum under the total order.
    pub fn max(self, other: Scalar) -> Scalar {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Canonical text form: rationals as `p/q` in lowest terms (`p` when the
    /// denominator is 1), floats via the shortest round-trip `f64` form.
    /// This is the serialization used in lookup keys and JSON output, so it
    /// must stay injective per kind.
    pub fn canonical_string(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(f) => {
                // Ryu-style shortest representation round-trips f64 exactly.
                let mut s = format!("{f}");
                if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN")
                {
                    s.push_str(".0");
                }
                s
            }
        }
    }

    fn kind_tag(&self) -> u8 {
        match self {
            Scalar::Rational(_) => 0,
            Scalar::Float(_) => 1,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a.total_cmp(b) == Ordering::Equal,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

/// Total order: rationals sort before floats, exact order within rationals,
/// IEEE `total_cmp` within floats. The cross-kind branch exists only so that
/// sorting heterogeneous debug collections cannot panic; real data never
/// mixes kinds.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.total_cmp(b),
            _ => self.kind_tag().cmp(&other.kind_tag()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind_tag().hash(state);
        match self {
            Scalar::Rational(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Scalar::Float(f) => f.to_bits().hash(state),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt, $name:literal) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => panic!("mixed scalar kinds in {}", $name),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +, "add");
scalar_binop!(Sub, sub, -, "sub");
scalar_binop!(Mul, mul, *, "mul");

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                assert!(!b.is_zero(), "rational division by zero");
                Scalar::Rational(a / b)
            }
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a / b),
            _ => panic!("mixed scalar kinds in div"),
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self) / (&rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(_) => ser.serialize_str(&self.canonical_string()),
            Scalar::Float(f) => ser.serialize_f64(*f),
        }
    }
}

/// An equality policy for scalar comparisons.
///
/// Exact mode is plain equality and is the only mode in which the library's
/// "if and only if" claims hold. Float mode treats `a` and `b` as equal when
/// `|a - b| <= max(abs_floor, rel * max(|a|, |b|))`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Tolerance {
    Exact,
    Float { rel: f64, abs_floor: f64 },
}

/// Default relative tolerance for float-mode comparisons.
pub const DEFAULT_REL_TOL: f64 = 1e-9;
/// Default absolute floor for float-mode comparisons near zero.
pub const DEFAULT_ABS_FLOOR: f64 = 1e-12;

impl Tolerance {
    /// The tolerance appropriate for a scalar kind: exact for rationals,
    /// the default float policy otherwise.
    pub fn for_kind(kind: ScalarKind) -> Tolerance {
        match kind {
            ScalarKind::Rational => Tolerance::Exact,
            ScalarKind::Float => Tolerance::Float {
                rel: DEFAULT_REL_TOL,
                abs_floor: DEFAULT_ABS_FLOOR,
            },
        }
    }

    /// Whether two scalars are equal under this policy.
    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        match self {
            Tolerance::Exact => a == b,
            Tolerance::Float { rel, abs_floor } => {
                let (x, y) = (a.to_f64(), b.to_f64());
                let diff = (x - y).abs();
                diff <= abs_floor.max(rel * x.abs().max(y.abs()))
            }
        }
    }

    /// Componentwise [`Tolerance::eq`] over equal-length slices.
    pub fn eq_vec(&self, a: &[Scalar], b: &[Scalar]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.eq(x, y))
    }
}

/// Parse the canonical text form of a rational: `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let err = || crate::Error::MalformedGraph(format!("bad rational literal {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().map_err(|_| err())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Sum a sequence of same-kind scalars; `kind` fixes the identity for an
/// empty sequence.
pub fn sum_scalars<'a>(items: impl IntoIterator<Item = &'a Scalar>, kind: ScalarKind) -> Scalar {
    items
        .into_iter()
        .fold(Scalar::zero(kind), |acc, s| &acc + s)
}

/// Degree-21 Maclaurin truncation of sine, evaluated exactly.
///
/// Exact-rational pipelines cannot evaluate transcendental sine, so the
/// rational variant of the sine-shaped catalog function uses this fixed
/// polynomial instead. What the catalog needs from "sine" is only that it is
/// a deterministic function that disagrees with every linear map away from a
/// neighborhood of 0 — any fixed odd nonlinear polynomial qualifies, and the
/// truncated series keeps float and rational modes numerically close on
/// small inputs.
pub fn sin_poly_exact(q: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut term = q.clone(); // q^(2k+1) / (2k+1)!
    let q2 = q * q;
    let mut sign = true;
    for k in 0..11u32 {
        if sign {
            acc += &term;
        } else {
            acc -= &term;
        }
        sign = !sign;
        let a = BigInt::from(2 * k + 2);
        let b = BigInt::from(2 * k + 3);
        term = term * &q2 / BigRational::from_integer(a * b);
    }
    acc
}

/// The same function on either scalar kind: true `f64::sin` for floats,
/// the exact polynomial for rationals.
pub fn sin_scalar(s: &Scalar) -> Scalar {
    match s {
        Scalar::Rational(r) => Scalar::Rational(sin_poly_exact(r)),
        Scalar::Float(f) => Scalar::Float(f.sin()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact_in_rational_mode() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        assert_eq!(&a + &b, Scalar::ratio(1, 2));
        assert_eq!(&a - &b, Scalar::ratio(1, 6));
        assert_eq!(&a * &b, Scalar::ratio(1, 18));
        assert_eq!(&a / &b, Scalar::from_int(2));
        assert_eq!(a.pow(3), Scalar::ratio(1, 27));
    }

    #[test]
    #[should_panic(expected = "mixed scalar kinds")]
    fn mixed_kind_arithmetic_panics() {
        let _ = &Scalar::from_int(1) + &Scalar::Float(1.0);
    }

    #[test]
    fn canonical_strings_are_lowest_terms() {
        assert_eq!(Scalar::ratio(2, 4).canonical_string(), "1/2");
        assert_eq!(Scalar::ratio(-6, 3).canonical_string(), "-2");
        assert_eq!(Scalar::from_int(7).canonical_string(), "7");
        assert_eq!(Scalar::Float(0.5).canonical_string(), "0.5");
        assert_eq!(Scalar::Float(2.0).canonical_string(), "2.0");
    }

    #[test]
    fn parse_rational_round_trips() {
        for s in ["0", "-3", "7/2", "-9/4"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(Scalar::Rational(r).canonical_string(), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn ordering_is_total_and_exact() {
        let mut v = vec![
            Scalar::ratio(1, 3),
            Scalar::from_int(-1),
            Scalar::ratio(1, 4),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Scalar::from_int(-1),
                Scalar::ratio(1, 4),
                Scalar::ratio(1, 3)
            ]
        );
    }

    #[test]
    fn tolerance_modes_behave_as_documented() {
        let t = Tolerance::Exact;
        assert!(t.eq(&Scalar::ratio(1, 3), &Scalar::ratio(2, 6)));
        assert!(!t.eq(&Scalar::ratio(1, 3), &Scalar::ratio(1, 4)));

        let f = Tolerance::for_kind(ScalarKind::Float);
        assert!(f.eq(&Scalar::Float(1.0), &Scalar::Float(1.0 + 1e-12)));
        assert!(!f.eq(&Scalar::Float(1.0), &Scalar::Float(1.0 + 1e-6)));
        // Absolute floor handles values near zero.
        assert!(f.eq(&Scalar::Float(0.0), &Scalar::Float(1e-13)));
        assert!(f.eq_vec(
            &[Scalar::Float(2.0), Scalar::Float(3.0)],
            &[Scalar::Float(2.0), Scalar::Float(3.0)]
        ));
        assert!(!f.eq_vec(&[Scalar::Float(2.0)], &[]));
    }

    #[test]
    fn sin_poly_matches_f64_sin_on_small_inputs() {
        // The truncation error of the degree-21 series at |q| <= 2 is below
        // 2^23/23! ~ 3e-16, so the exact polynomial and f64::sin agree to
        // ~1e-12 there.
        for q in [-2.0f64, -0.5, 0.0, 0.25, 1.0, 2.0] {
            let exact = sin_poly_exact(&BigRational::new(
                BigInt::from((q * 4.0) as i64),
                BigInt::from(4),
            ));
            assert!((exact.to_f64().unwrap() - q.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn sin_poly_disagrees_with_identity_away_from_zero() {
        let two = BigRational::from_integer(BigInt::from(2));
        assert_ne!(sin_poly_exact(&two), two);
    }
}
