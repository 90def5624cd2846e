//! The max-plus scalar: an exact rational weight or `-inf`.

use crate::error::{Result, TropError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

/// A weight in the max-plus semiring: `max` is addition, `+` is
/// multiplication, `-inf` is the additive identity and `0` the
/// multiplicative one. Arithmetic is exact rational throughout.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TropScalar {
    NegInf,
    Finite(BigRational),
}

pub use TropScalar::NegInf;

impl TropScalar {
    pub fn int(n: i64) -> Self {
        TropScalar::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        TropScalar::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The multiplicative identity, weight 0.
    pub fn one() -> Self {
        TropScalar::Finite(BigRational::zero())
    }

    pub fn finite(r: BigRational) -> Self {
        TropScalar::Finite(r)
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, TropScalar::NegInf)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_neg_inf()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            TropScalar::NegInf => None,
            TropScalar::Finite(r) => Some(r),
        }
    }

    pub fn expect_finite(&self) -> Result<&BigRational> {
        self.as_rational().ok_or(TropError::InvalidScalar)
    }

    /// Tropical inverse `-x` of a finite scalar.
    pub fn neg(&self) -> Result<TropScalar> {
        match self {
            TropScalar::NegInf => Err(TropError::InvalidScalar),
            TropScalar::Finite(r) => Ok(TropScalar::Finite(-r.clone())),
        }
    }
}

impl PartialOrd for TropScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TropScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TropScalar::NegInf, TropScalar::NegInf) => Ordering::Equal,
            (TropScalar::NegInf, TropScalar::Finite(_)) => Ordering::Less,
            (TropScalar::Finite(_), TropScalar::NegInf) => Ordering::Greater,
            (TropScalar::Finite(a), TropScalar::Finite(b)) => a.cmp(b),
        }
    }
}

/// Tropical addition is `max`.
impl Add for &TropScalar {
    type Output = TropScalar;
    fn add(self, rhs: &TropScalar) -> TropScalar {
        if self >= rhs {
            self.clone()
        } else {
            rhs.clone()
        }
    }
}

impl Add for TropScalar {
    type Output = TropScalar;
    fn add(self, rhs: TropScalar) -> TropScalar {
        if self >= rhs {
            self
        } else {
            rhs
        }
    }
}

/// Tropical multiplication is ordinary addition; `-inf` annihilates.
impl Mul for &TropScalar {
    type Output = TropScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &TropScalar) -> TropScalar {
        match (self, rhs) {
            (TropScalar::Finite(a), TropScalar::Finite(b)) => TropScalar::Finite(a + b),
            _ => TropScalar::NegInf,
        }
    }
}

impl Mul for TropScalar {
    type Output = TropScalar;
    fn mul(self, rhs: TropScalar) -> TropScalar {
        &self * &rhs
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropScalar::NegInf => write!(f, "-inf"),
            TropScalar::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for TropScalar {
    type Err = TropError;

    /// Accepts `-inf`, integers like `-3`, and rationals like `5/2`.
    fn from_str(s: &str) -> Result<TropScalar> {
        let s = s.trim();
        if s == "-inf" {
            return Ok(TropScalar::NegInf);
        }
        if let Some((num, den)) = s.split_once('/') {
            let n = BigInt::from_str(num.trim())
                .map_err(|e| TropError::Parse(format!("bad numerator {num:?}: {e}")))?;
            let d = BigInt::from_str(den.trim())
                .map_err(|e| TropError::Parse(format!("bad denominator {den:?}: {e}")))?;
            if d.is_zero() {
                return Err(TropError::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(TropScalar::Finite(BigRational::new(n, d)));
        }
        let n = BigInt::from_str(s).map_err(|e| TropError::Parse(format!("bad weight {s:?}: {e}")))?;
        Ok(TropScalar::Finite(BigRational::from_integer(n)))
    }
}

/// Exact ceiling of a rational.
pub fn ceil_rational(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

/// `true` when the rational is an integer.
pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Rational absolute value, handy when accumulating sums of weights.
pub fn abs_rational(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_inf_is_additive_identity() {
        let x = TropScalar::ratio(7, 2);
        assert_eq!(&TropScalar::NegInf + &x, x);
        assert_eq!(&x + &TropScalar::NegInf, x);
        assert_eq!(&TropScalar::NegInf * &x, TropScalar::NegInf);
    }

    #[test]
    fn total_order_puts_neg_inf_first() {
        let lo = TropScalar::int(-1_000_000);
        assert!(TropScalar::NegInf < lo);
        assert!(TropScalar::ratio(1, 3) < TropScalar::ratio(1, 2));
    }

    #[test]
    fn mul_adds_weights() {
        assert_eq!(
            TropScalar::ratio(1, 2) * TropScalar::ratio(1, 3),
            TropScalar::ratio(5, 6)
        );
    }

    #[test]
    fn parse_round_trip() {
        for s in ["-inf", "5", "-3", "7/2", "-9/4"] {
            let v: TropScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1/0".parse::<TropScalar>().is_err());
        assert!("x".parse::<TropScalar>().is_err());
    }
}
