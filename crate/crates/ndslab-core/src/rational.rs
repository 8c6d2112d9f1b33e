//! Arbitrary-precision rational scalars.
//!
//! `Rational` is the only number type used by the crate. Values are kept in
//! canonical form (positive denominator, reduced by gcd), so equality of
//! values is equality of representations. Serialization is always the exact
//! string `"p/q"`; floating point never enters any computation path.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Canonical rational equal to `n/d`. Rejects `d == 0`.
    pub fn new(n: i64, d: i64) -> Result<Self> {
        Self::from_bigint(BigInt::from(n), BigInt::from(d))
    }

    /// Canonical rational from big integers. Rejects a zero denominator.
    pub fn from_bigint(n: BigInt, d: BigInt) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(n, d)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Integer part rounded toward negative infinity.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn in_unit_interval(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    /// Lossy conversion used only for human-facing "approximate" columns.
    pub fn to_f64_approx(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses `"p/q"` or a bare integer string. Decimal notation is rejected
    /// so inexact inputs cannot sneak in.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let reject = |reason: &str| Error::ParseRational {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(reject("empty string"));
        }
        if s.contains('.') || s.contains(['e', 'E']) {
            return Err(reject("decimal/float notation is not accepted; write p/q"));
        }
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|e| reject(&e.to_string()))?;
                Ok(Rational(BigRational::from_integer(n)))
            }
            Some((p, q)) => {
                let n = BigInt::from_str(p.trim()).map_err(|e| reject(&e.to_string()))?;
                let d = BigInt::from_str(q.trim()).map_err(|e| reject(&e.to_string()))?;
                if d.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

/// Canonicalizing constructor mirroring the `n/d -> Rational` contract.
pub fn rat_normalize(n: i64, d: i64) -> Result<Rational> {
    Rational::new(n, d)
}

impl fmt::Display for Rational {
    /// Always the explicit form `p/q`, e.g. `0/1`, `7/9`, `-3/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Rational::parse(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::parse(&s).map_err(de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rational {
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

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

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

/// Distance `|a - b|`, the metric of the phase space.
pub fn dist(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// The simplest rational (smallest denominator, then smallest |numerator|)
/// inside the closed interval `[lo, hi]`. Stern-Brocot style descent; used to
/// snap cluster representatives to exact cycle candidates.
pub fn simplest_in_interval(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval");
    // Any integer in range wins immediately.
    let ceil_lo = -((-lo).floor_int());
    if Rational(BigRational::from_integer(ceil_lo.clone())) <= *hi {
        return Rational(BigRational::from_integer(ceil_lo));
    }
    // No integer in range, so both endpoints share a floor and have nonzero
    // fractional parts.
    let f = lo.floor_int();
    let fl = Rational(BigRational::from_integer(f));
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    // Recurse on reciprocals: simplest in [lo,hi] = f + 1/simplest_in([1/hi', 1/lo']).
    let inv_hi = Rational::one() / lo_frac;
    let inv_lo = Rational::one() / hi_frac;
    let inner = simplest_in_interval(&inv_lo, &inv_hi);
    fl + Rational::one() / inner
}
