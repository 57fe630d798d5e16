//! Arbitrary-precision rational numbers with exact `p/q` text form.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::ScalarError;

/// A reduced rational number `p/q` with `q > 0`.
///
/// Wraps an arbitrary-precision ratio and fixes the external text form: always
/// `p/q`, or just `p` when the denominator is 1. Serialized to JSON as that
/// string, never as a float.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing to canonical form.
    pub fn new(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    /// Builds `num/den` from big integers, reducing to canonical form.
    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self(BigRational::new(num, den)))
    }

    /// The rational zero.
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    /// The rational one.
    pub fn one() -> Self {
        Self(BigRational::one())
    }

    /// True when the value is zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True when the value is one.
    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True when the value is negative.
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// True when the value is positive.
    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Numerator of the reduced form.
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the reduced form (always positive).
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// True when the denominator is 1.
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True when the value is an integer `>= from`.
    pub fn is_integer_at_least(&self, from: i64) -> bool {
        self.is_integer() && self.numer() >= &BigInt::from(from)
    }

    /// Exact quotient, failing on a zero divisor.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// The representative of `self + Z` lying in `[0, 1)`.
    pub fn coset_rep(&self) -> Self {
        Self(&self.0 - BigRational::from_integer(self.0.floor().to_integer()))
    }

    /// True when `self - other` is an integer.
    pub fn same_coset(&self, other: &Self) -> bool {
        (self - other).is_integer()
    }

    /// Integer power with negative exponents allowed on nonzero values.
    pub fn pow_i(&self, exp: i64) -> Result<Self, ScalarError> {
        if exp < 0 && self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self(self.0.pow(
            i32::try_from(exp).expect("exponent fits in i32"),
        )))
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    /// Exact conversion to `i64` when the value is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    /// Parses `p` or `p/q` with optional leading sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::ParseRational(s.to_owned());
        match s.split_once('/') {
            None => {
                let n: BigInt = s.trim().parse().map_err(|_| bad())?;
                Ok(Self(BigRational::from_integer(n)))
            }
            Some((p, q)) => {
                let n: BigInt = p.trim().parse().map_err(|_| bad())?;
                let d: BigInt = q.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(ScalarError::ZeroDenominator);
                }
                Ok(Self(BigRational::new(n, d)))
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self(BigRational::from_integer(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rational> for Rational {
    fn div_assign(&mut self, rhs: &Rational) {
        self.0 /= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

/// Builds a rational from an integer or a numerator/denominator pair.
///
/// Panics on a zero denominator, so it is meant for literals.
#[macro_export]
macro_rules! rat {
    ($n:expr) => {
        $crate::scalars::Rational::from($n as i64)
    };
    ($n:expr, $d:expr) => {
        $crate::scalars::Rational::new($n as i64, $d as i64).expect("nonzero denominator")
    };
}
