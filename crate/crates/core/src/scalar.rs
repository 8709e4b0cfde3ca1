//! Coefficient backends.
//!
//! Every numeric quantity in the crate lives in a type implementing [`Scalar`].
//! Three backends are provided:
//!
//! - [`Rational`]: arbitrary precision, an exact ordered field.
//! - `f64`: the float backend. Equality is bitwise; tolerances are applied
//!   by the callers that compare residuals.
//! - [`Surd`]: exact elements of the multi-quadratic extension
//!   `Q(√2, √3, √5, …)`, needed once square-root weights enter the su(2)
//!   generators.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Builds the rational `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Commutative ring of coefficients.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True when equality is exact (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: &Rational) -> Self;
    /// Nearest `f64`, used for residual norms and reporting.
    fn to_f64(&self) -> f64;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// `|self| > 1`; exact backends override with an exact comparison.
    fn exceeds_unit(&self) -> bool {
        self.to_f64().abs() > 1.0
    }

    /// `|self| == 1`.
    fn is_unit_magnitude(&self) -> bool {
        self.to_f64().abs() == 1.0
    }
}

/// Scalars with division.
pub trait Field: Scalar + Div<Output = Self> {}

/// Ordered fields: pivots and eigenvalue signs make sense.
pub trait Real: Field + PartialOrd {
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

/// Rings closed under square roots of non-negative rationals.
pub trait SqrtScalar: Scalar {
    /// `√r` for `r ≥ 0`.
    fn sqrt_rational(r: &Rational) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pow(&self, exp: u32) -> Self {
        Float::powi(*self, exp as i32)
    }
}

impl Field for f64 {}

impl Real for f64 {
    fn abs(&self) -> Self {
        Float::abs(*self)
    }
}

impl SqrtScalar for f64 {
    fn sqrt_rational(r: &Rational) -> Self {
        Float::sqrt(ToPrimitive::to_f64(r).unwrap_or(f64::NAN))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn pow(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }
    fn exceeds_unit(&self) -> bool {
        Signed::abs(self) > One::one()
    }
    fn is_unit_magnitude(&self) -> bool {
        Signed::abs(self) == One::one()
    }
}

impl Field for Rational {}

impl Real for Rational {
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

/// Splits a positive integer into `(s, f)` with `n = s² f` and `f` squarefree.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.sign() == Sign::Plus);
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut d = BigInt::from(2u32);
    while &d * &d <= rest {
        let mut exp = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            exp += 1;
        }
        for _ in 0..exp / 2 {
            square *= &d;
        }
        if exp % 2 == 1 {
            free *= &d;
        }
        d += 1u32;
    }
    (square, free * rest)
}

/// Exact element `Σ cᵢ √rᵢ` with squarefree radicands `rᵢ` and rational `cᵢ`.
///
/// Square roots of distinct squarefree integers are linearly independent over
/// the rationals, so the representation is unique and equality is exact.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<BigInt, Rational>,
}

impl Surd {
    /// `coeff · √radicand`; `radicand` need not be squarefree.
    pub fn new(coeff: Rational, radicand: &BigInt) -> Self {
        let mut out = Surd::default();
        if Zero::is_zero(&coeff) || Zero::is_zero(radicand) {
            return out;
        }
        assert!(radicand.sign() == Sign::Plus, "negative radicand");
        let (s, f) = split_square(radicand);
        out.insert(f, coeff * Rational::from_integer(s));
        out
    }

    fn insert(&mut self, radicand: BigInt, coeff: Rational) {
        if Zero::is_zero(&coeff) {
            return;
        }
        let entry = self
            .terms
            .entry(radicand.clone())
            .or_insert_with(Zero::zero);
        *entry += coeff;
        if Zero::is_zero(entry) {
            self.terms.remove(&radicand);
        }
    }

    /// `(radicand, coefficient)` pairs, radicands ascending.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }

    /// The rational value when no irrational part is present.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Zero::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if r.is_one() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*sqrt({})", c, r)?;
            }
        }
        Ok(())
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(mut self, rhs: Surd) -> Surd {
        for (r, c) in rhs.terms {
            self.insert(r, c);
        }
        self
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(mut self) -> Surd {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let mut out = Surd::default();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &rhs.terms {
                // r1, r2 squarefree: √r1·√r2 = g·√((r1/g)(r2/g)) with the
                // cofactor again squarefree.
                let g = r1.gcd(r2);
                let radicand = (r1 / &g) * (r2 / &g);
                out.insert(radicand, c1 * c2 * Rational::from_integer(g));
            }
        }
        out
    }
}

impl Scalar for Surd {
    const EXACT: bool = true;

    fn zero() -> Self {
        Surd::default()
    }
    fn one() -> Self {
        Surd::from_rational(&One::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(r: &Rational) -> Self {
        let mut out = Surd::default();
        out.insert(BigInt::one(), r.clone());
        out
    }
    fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| {
                Scalar::to_f64(c) * Float::sqrt(ToPrimitive::to_f64(r).unwrap_or(f64::NAN))
            })
            .sum()
    }
    fn exceeds_unit(&self) -> bool {
        match self.as_rational() {
            Some(r) => r.exceeds_unit(),
            None => Float::abs(self.to_f64()) > 1.0,
        }
    }
    fn is_unit_magnitude(&self) -> bool {
        match self.as_rational() {
            Some(r) => r.is_unit_magnitude(),
            None => false,
        }
    }
}

impl SqrtScalar for Surd {
    fn sqrt_rational(r: &Rational) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        // √(p/q) = √(p·q) / q
        let den = r.denom().clone();
        let radicand = r.numer() * &den;
        Surd::new(Rational::new(BigInt::one(), den), &radicand)
    }
}

/// Frobenius-style norm of a slice of scalars, computed in `f64`.
pub fn norm<S: Scalar>(values: impl IntoIterator<Item = S>) -> f64 {
    let sum: f64 = values
        .into_iter()
        .map(|v| {
            let x = v.to_f64();
            x * x
        })
        .sum();
    Float::sqrt(sum)
}
