//! Exact rational scalars and forward-mode dual numbers over them.
//!
//! [`ExactRational`] is always kept in lowest terms with a positive
//! denominator, so structural equality is numeric equality. Digit growth is
//! unbounded: long iterations of nonlinear maps trade memory for exactness.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Abs, Pow, Sign};
use malachite_base::num::conversion::traits::{IsInteger, RoundingFrom};
use malachite_base::rounding_modes::RoundingMode;
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use malachite_q::Rational;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(Rational);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(Rational::from(0u32))
    }

    pub fn one() -> Self {
        ExactRational(Rational::from(1u32))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactRational(Rational::from(n))
    }

    /// `numerator / denominator`, reduced.
    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::ZeroDenominator(format!("{numerator}/{denominator}")));
        }
        Ok(ExactRational(Rational::from_signeds(
            numerator,
            denominator,
        )))
    }

    /// Parses `[-]digits` or `[-]digits/digits`.
    pub fn parse(text: &str) -> Result<Self> {
        let malformed = || Error::Parse(text.to_string());
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (num_text, den_text) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(num_text) || !den_text.is_none_or(all_digits) {
            return Err(malformed());
        }
        let numerator = Natural::from_str(num_text).map_err(|_| malformed())?;
        let denominator = match den_text {
            Some(d) => Natural::from_str(d).map_err(|_| malformed())?,
            None => Natural::from(1u32),
        };
        if denominator == 0u32 {
            return Err(Error::ZeroDenominator(text.to_string()));
        }
        // `sign == true` means negative; `from_sign_and_naturals` wants "is nonnegative".
        Ok(ExactRational(Rational::from_sign_and_naturals(
            !sign,
            numerator,
            denominator,
        )))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0u32
    }

    pub fn is_one(&self) -> bool {
        self.0 == 1u32
    }

    pub fn is_integer(&self) -> bool {
        (&self.0).is_integer()
    }

    pub fn signum(&self) -> Ordering {
        self.0.sign()
    }

    pub fn abs(&self) -> Self {
        ExactRational((&self.0).abs())
    }

    pub fn numerator(&self) -> Integer {
        let (n, _) = self.0.numerator_and_denominator_ref();
        let n = Integer::from(n);
        if self.0 < 0u32 {
            -n
        } else {
            n
        }
    }

    pub fn denominator(&self) -> Natural {
        self.0.to_denominator()
    }

    /// Integer value when the rational is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        i64::try_from(&self.numerator()).ok()
    }

    /// Nearest `f64`; lossy and saturating.
    pub fn to_f64(&self) -> f64 {
        f64::rounding_from(&self.0, RoundingMode::Nearest).0
    }

    /// `ln |self|`, accurate to a relative error below `2^-52` even when
    /// the value is far outside the `f64` range.
    pub fn ln_abs(&self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::Domain("logarithm of zero".to_string()));
        }
        Ok((&self.0).abs().approx_log())
    }

    pub fn checked_div(&self, rhs: &ExactRational, site: &'static str) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero { site });
        }
        Ok(ExactRational(&self.0 / &rhs.0))
    }

    pub fn recip(&self, site: &'static str) -> Result<Self> {
        ExactRational::one().checked_div(self, site)
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn pow(&self, exponent: i64) -> Result<Self> {
        if exponent < 0 && self.is_zero() {
            return Err(Error::DivisionByZero { site: "pow" });
        }
        Ok(ExactRational((&self.0).pow(exponent)))
    }
}

impl From<i64> for ExactRational {
    fn from(value: i64) -> Self {
        ExactRational::from_integer(value)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExactRational::parse(s)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LiteralVisitor;

        impl Visitor<'_> for LiteralVisitor {
            type Value = ExactRational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational literal string such as \"-3/4\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExactRational, E> {
                ExactRational::parse(v).map_err(E::custom)
            }
        }

        deserializer.deserialize_str(LiteralVisitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
        impl $assign_trait<&ExactRational> for ExactRational {
            fn $assign_method(&mut self, rhs: &ExactRational) {
                $assign_trait::$assign_method(&mut self.0, &rhs.0);
            }
        }
        impl $assign_trait<ExactRational> for ExactRational {
            fn $assign_method(&mut self, rhs: ExactRational) {
                $assign_trait::$assign_method(&mut self.0, rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |acc, x| acc * x)
    }
}

/// A value together with its exact partial derivatives with respect to a
/// fixed, ordered set of independent variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualScalar {
    value: ExactRational,
    partials: Vec<ExactRational>,
}

impl DualScalar {
    /// A constant: every partial is zero.
    pub fn constant(value: ExactRational, arity: usize) -> Self {
        DualScalar {
            value,
            partials: vec![ExactRational::zero(); arity],
        }
    }

    /// The independent variable number `index` out of `arity`.
    pub fn variable(value: ExactRational, index: usize, arity: usize) -> Self {
        assert!(index < arity, "seed index {index} out of arity {arity}");
        let mut partials = vec![ExactRational::zero(); arity];
        partials[index] = ExactRational::one();
        DualScalar { value, partials }
    }

    pub fn from_parts(value: ExactRational, partials: Vec<ExactRational>) -> Self {
        DualScalar { value, partials }
    }

    pub fn value(&self) -> &ExactRational {
        &self.value
    }

    pub fn partials(&self) -> &[ExactRational] {
        &self.partials
    }

    pub fn partial(&self, index: usize) -> &ExactRational {
        &self.partials[index]
    }

    pub fn arity(&self) -> usize {
        self.partials.len()
    }

    /// `Σ direction_i · ∂self/∂z_i`.
    pub fn directional(&self, direction: &[ExactRational]) -> ExactRational {
        assert_eq!(direction.len(), self.arity(), "direction arity mismatch");
        self.partials
            .iter()
            .zip(direction)
            .map(|(p, d)| p * d)
            .sum()
    }

    fn check_arity(&self, other: &DualScalar) {
        assert_eq!(
            self.arity(),
            other.arity(),
            "dual numbers with different arity combined"
        );
    }

    pub fn scale(&self, factor: &ExactRational) -> DualScalar {
        DualScalar {
            value: &self.value * factor,
            partials: self.partials.iter().map(|p| p * factor).collect(),
        }
    }

    /// Quotient rule: `d(u/v) = (du·v − u·dv) / v²`.
    pub fn checked_div(&self, rhs: &DualScalar, site: &'static str) -> Result<DualScalar> {
        self.check_arity(rhs);
        let value = self.value.checked_div(&rhs.value, site)?;
        let v_squared = &rhs.value * &rhs.value;
        let partials = self
            .partials
            .iter()
            .zip(&rhs.partials)
            .map(|(du, dv)| (du * &rhs.value - &self.value * dv).checked_div(&v_squared, site))
            .collect::<Result<Vec<_>>>()?;
        Ok(DualScalar { value, partials })
    }

    pub fn recip(&self, site: &'static str) -> Result<DualScalar> {
        DualScalar::constant(ExactRational::one(), self.arity()).checked_div(self, site)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, exponent: i64) -> Result<DualScalar> {
        let base = if exponent < 0 {
            self.recip("pow")?
        } else {
            self.clone()
        };
        let mut remaining = exponent.unsigned_abs();
        let mut acc = DualScalar::constant(ExactRational::one(), self.arity());
        let mut square = base;
        while remaining > 0 {
            if remaining & 1 == 1 {
                acc = &acc * &square;
            }
            remaining >>= 1;
            if remaining > 0 {
                square = &square * &square;
            }
        }
        Ok(acc)
    }
}

impl Add<&DualScalar> for &DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: &DualScalar) -> DualScalar {
        self.check_arity(rhs);
        DualScalar {
            value: &self.value + &rhs.value,
            partials: self
                .partials
                .iter()
                .zip(&rhs.partials)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&DualScalar> for &DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: &DualScalar) -> DualScalar {
        self.check_arity(rhs);
        DualScalar {
            value: &self.value - &rhs.value,
            partials: self
                .partials
                .iter()
                .zip(&rhs.partials)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&DualScalar> for &DualScalar {
    type Output = DualScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &DualScalar) -> DualScalar {
        self.check_arity(rhs);
        DualScalar {
            value: &self.value * &rhs.value,
            partials: self
                .partials
                .iter()
                .zip(&rhs.partials)
                .map(|(du, dv)| du * &rhs.value + &self.value * dv)
                .collect(),
        }
    }
}

impl Neg for &DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar {
            value: -&self.value,
            partials: self.partials.iter().map(|p| -p).collect(),
        }
    }
}

macro_rules! owned_dual_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<DualScalar> for DualScalar {
            type Output = DualScalar;
            fn $method(self, rhs: DualScalar) -> DualScalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&DualScalar> for DualScalar {
            type Output = DualScalar;
            fn $method(self, rhs: &DualScalar) -> DualScalar {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<DualScalar> for &DualScalar {
            type Output = DualScalar;
            fn $method(self, rhs: DualScalar) -> DualScalar {
                $trait::$method(self, &rhs)
            }
        }
    };
}

owned_dual_ops!(Add, add);
owned_dual_ops!(Sub, sub);
owned_dual_ops!(Mul, mul);

impl Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        -&self
    }
}
