use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumError;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
        let den = den.into();
        assert!(!den.is_zero(), "rational with zero denominator");
        Rational(BigRational::new(num.into(), den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Rational {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rational, NumError> {
        if self.is_zero() {
            Err(NumError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational, NumError> {
        if other.is_zero() {
            Err(NumError::DivisionByZero)
        } else {
            Ok(Rational(&self.0 / &other.0))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Integer value when the number is integral and fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Rational {
        Rational(num_traits::pow(self.0.clone(), e as usize))
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract_positive(&self) -> Rational {
        let f = Rational::from_integer(self.floor());
        self - &f
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Rational {
        Rational::from_integer(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Rational {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Rational {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<'b> Div<&'b Rational> for &Rational {
    type Output = Rational;
    /// Panics on division by zero; use [`Rational::checked_div`] for a fallible version.
    fn div(self, rhs: &'b Rational) -> Rational {
        self.checked_div(rhs).expect("rational division by zero")
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        (&self).div(&rhs)
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

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = NumError;

    /// Parses `"p/q"` or `"p"`; decimals are rejected.
    fn from_str(s: &str) -> Result<Rational, NumError> {
        let bad = || NumError::Parse(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from(n)),
        }
    }
}

/// Greatest common divisor of machine integers (non-negative result).
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Exponent bound that is either a rational number or `+∞` (exactly known).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Bound {
    Finite(Rational),
    Infinite,
}

impl Bound {
    pub fn finite(r: impl Into<Rational>) -> Bound {
        Bound::Finite(r.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinite)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(r) => Some(r),
            Bound::Infinite => None,
        }
    }

    pub fn min(a: &Bound, b: &Bound) -> Bound {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn shift(&self, by: &Rational) -> Bound {
        match self {
            Bound::Finite(r) => Bound::Finite(r + by),
            Bound::Infinite => Bound::Infinite,
        }
    }

    /// Multiplies by a positive rational.
    pub fn scale(&self, by: &Rational) -> Bound {
        debug_assert!(!by.is_negative() && !by.is_zero());
        match self {
            Bound::Finite(r) => Bound::Finite(r * by),
            Bound::Infinite => Bound::Infinite,
        }
    }

    /// True when every exponent strictly below `e` is covered.
    pub fn covers(&self, e: &Rational) -> bool {
        match self {
            Bound::Finite(r) => e < r,
            Bound::Infinite => true,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Bound) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Bound) -> Ordering {
        match (self, other) {
            (Bound::Infinite, Bound::Infinite) => Ordering::Equal,
            (Bound::Infinite, _) => Ordering::Greater,
            (_, Bound::Infinite) => Ordering::Less,
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(r) => write!(f, "{r}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Bound, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) if s == "inf" => Ok(Bound::Infinite),
            Repr::Str(s) => s.parse().map(Bound::Finite).map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Bound::finite(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::new(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn parse_roundtrip() {
        let r: Rational = "10/-4".parse().unwrap();
        assert_eq!(r, Rational::new(-5, 2));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from(7));
        assert!("1.5".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Rational::one().recip(), Ok(Rational::one()));
        assert!(Rational::zero().recip().is_err());
    }

    #[test]
    fn bound_order() {
        assert!(Bound::Infinite > Bound::finite(100));
        assert_eq!(Bound::min(&Bound::finite(3), &Bound::finite(2)), Bound::finite(2));
        assert!(Bound::finite(2).covers(&Rational::new(3, 2)));
        assert!(!Bound::finite(2).covers(&Rational::from(2)));
    }
}
