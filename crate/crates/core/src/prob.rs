//! Probability values that stay exact when built from rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ModelError;

/// A probability, either an exact rational or a float.
///
/// Arithmetic between two exact values stays exact; anything touching a
/// float degrades to a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Prob {
    Exact(BigRational),
    Approx(f64),
}

impl Prob {
    pub fn zero() -> Self {
        Prob::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Prob::Exact(BigRational::one())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Prob::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Prob::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Prob::Approx(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_zero(),
            Prob::Approx(x) => *x == 0.0,
        }
    }

    /// Equality test: exact when both sides are exact, otherwise
    /// `|self - other| <= tol`.
    pub fn close(&self, other: &Prob, tol: f64) -> bool {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }

    /// `|self - other|` as a float (zero for equal exact values).
    pub fn distance(&self, other: &Prob) -> f64 {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => (a - b).abs().to_f64().unwrap_or(f64::NAN),
            _ => (self.to_f64() - other.to_f64()).abs(),
        }
    }

    pub fn in_unit_interval(&self) -> bool {
        match self {
            Prob::Exact(r) => !r.is_negative() && *r <= BigRational::one(),
            Prob::Approx(x) => (0.0..=1.0).contains(x),
        }
    }
}

impl PartialOrd for Prob {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prob::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Prob::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Prob::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl From<f64> for Prob {
    fn from(x: f64) -> Self {
        Prob::Approx(x)
    }
}

impl From<u64> for Prob {
    fn from(n: u64) -> Self {
        Prob::Exact(BigRational::from_integer(BigInt::from(n)))
    }
}

/// Parses `"3/8"`, `"0.125"` or `"1"` as exact rationals.
impl FromStr for Prob {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::BadLiteral(s.to_string());
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            return Ok(Prob::Exact(BigRational::new(num, den)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(Prob::Exact(BigRational::new(digits, den)));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Prob::Exact(BigRational::from_integer(n)))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Prob> for &Prob {
            type Output = Prob;
            fn $method(self, rhs: &Prob) -> Prob {
                match (self, rhs) {
                    (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a $op b),
                    _ => Prob::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&Prob> for &Prob {
    type Output = Prob;

    /// Exact division by an exact zero falls back to a float NaN.
    fn div(self, rhs: &Prob) -> Prob {
        match (self, rhs) {
            (Prob::Exact(a), Prob::Exact(b)) if !b.is_zero() => Prob::Exact(a / b),
            _ => Prob::Approx(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl std::iter::Sum for Prob {
    fn sum<I: Iterator<Item = Prob>>(iter: I) -> Self {
        iter.fold(Prob::zero(), |acc, p| &acc + &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!("1/2".parse::<Prob>().unwrap(), Prob::ratio(1, 2));
        assert_eq!("0.125".parse::<Prob>().unwrap(), Prob::ratio(1, 8));
        assert_eq!("1".parse::<Prob>().unwrap(), Prob::one());
        assert!("1/0".parse::<Prob>().is_err());
        assert!("x".parse::<Prob>().is_err());
        assert!("0.".parse::<Prob>().is_err());
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let half = Prob::ratio(1, 2);
        let sum = &half + &half;
        assert_eq!(sum, Prob::one());
        assert!((&half * &half).is_exact());
        assert!(!(&half + &Prob::Approx(0.1)).is_exact());
    }

    #[test]
    fn close_is_exact_for_rationals() {
        let a = Prob::ratio(1, 3);
        let b = Prob::Approx(1.0 / 3.0);
        assert!(a.close(&b, 1e-12));
        assert!(a.close(&Prob::ratio(2, 6), 0.0));
        assert!(!Prob::ratio(1, 3).close(&Prob::ratio(333_333, 1_000_000), 1.0));
    }

    #[test]
    fn display_round_trips() {
        for s in ["3/8", "1", "0"] {
            let p: Prob = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
    }
}
