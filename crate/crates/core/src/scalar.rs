//! Exact distances.
//!
//! Every distance, radius and bound in this crate is an exact rational. The
//! certificate checks compare chains of inequalities with no tolerance, so
//! floating point is never used.

use core::fmt;
use core::ops::{Add, Div, Mul, Sub};
use core::str::FromStr;

use num_rational::Ratio;

/// An exact nonnegative-or-negative rational number backed by `Ratio<i64>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(Ratio<i64>);

impl Scalar {
    pub const ZERO: Scalar = Scalar(Ratio::new_raw(0, 1));
    pub const ONE: Scalar = Scalar(Ratio::new_raw(1, 1));

    /// Builds `numer / denom` in lowest terms. Returns `None` for a zero
    /// denominator.
    pub fn new(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            None
        } else {
            Some(Scalar(Ratio::new(numer, denom)))
        }
    }

    pub const fn int(value: i64) -> Self {
        Scalar(Ratio::new_raw(value, 1))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        *self > Scalar::ZERO
    }

    pub fn is_negative(&self) -> bool {
        *self < Scalar::ZERO
    }

    /// Multiplies by a small integer factor (used for bounds like `4s`).
    pub fn times(self, k: i64) -> Self {
        Scalar(self.0 * k)
    }

    pub fn halve(self) -> Self {
        Scalar(self.0 / 2)
    }
}

impl From<i64> for Scalar {
    fn from(value: i64) -> Self {
        Scalar::int(value)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

/// Panics on division by zero, like integer division.
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 / rhs.0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid exact scalar {0:?}: expected \"p\" or \"p/q\" with q > 0")]
pub struct ParseScalarError(pub alloc::string::String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.into());
        let t = s.trim();
        match t.split_once('/') {
            None => t.parse::<i64>().map(Scalar::int).map_err(|_| err()),
            Some((p, q)) => {
                let p = p.trim().parse::<i64>().map_err(|_| err())?;
                let q = q.trim().parse::<i64>().map_err(|_| err())?;
                if q <= 0 {
                    return Err(err());
                }
                Ok(Scalar(Ratio::new(p, q)))
            }
        }
    }
}

/// A scalar or the `+infinity` marker.
///
/// Variant order makes every finite value compare below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(Scalar),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<Scalar> {
        match self {
            Extended::Finite(s) => Some(*s),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

impl From<Scalar> for Extended {
    fn from(value: Scalar) -> Self {
        Extended::Finite(value)
    }
}

impl PartialEq<Scalar> for Extended {
    fn eq(&self, other: &Scalar) -> bool {
        *self == Extended::Finite(*other)
    }
}

impl PartialOrd<Scalar> for Extended {
    fn partial_cmp(&self, other: &Scalar) -> Option<core::cmp::Ordering> {
        Some(self.cmp(&Extended::Finite(*other)))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(s) => s.fmt(f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!("4".parse::<Scalar>().unwrap(), Scalar::int(4));
        assert_eq!("2/8".parse::<Scalar>().unwrap(), Scalar::new(1, 4).unwrap());
        assert_eq!("-3/6".parse::<Scalar>().unwrap(), Scalar::new(-1, 2).unwrap());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1/-2".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(Scalar::new(6, 4).unwrap().to_string(), "3/2");
        assert_eq!(Scalar::int(7).to_string(), "7");
        assert_eq!(Extended::Infinite.to_string(), "inf");
    }

    #[test]
    fn infinity_dominates() {
        assert!(Extended::Finite(Scalar::int(i64::MAX)) < Extended::Infinite);
        assert!(Extended::Infinite > Scalar::int(3));
        assert!(Extended::Finite(Scalar::int(1)) < Scalar::int(2));
    }

    #[test]
    fn arithmetic_is_exact() {
        let q = Scalar::new(1, 3).unwrap();
        assert_eq!(q + q + q, Scalar::ONE);
        assert_eq!(Scalar::int(1) / Scalar::int(4), Scalar::new(1, 4).unwrap());
        assert_eq!(q.times(6), Scalar::int(2));
        assert_eq!(Scalar::int(1).halve(), Scalar::new(1, 2).unwrap());
    }
}
