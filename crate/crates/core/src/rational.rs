//! Exact rationals extended with a top element `INFINITY`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational (expected `p`, `p/q` or `INF`)")]
    Parse(String),
}

/// A reduced fraction `num/den` with `den > 0`, or `INFINITY`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rational {
    Finite(Ratio<i64>),
    Infinity,
}

pub use Rational::Infinity as INFINITY;

impl Rational {
    pub const ZERO: Rational = Rational::Finite(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational::Finite(Ratio::new_raw(1, 1));

    pub fn new(num: i64, den: i64) -> Result<Rational, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational::Finite(Ratio::new(num, den)))
    }

    /// `num/den` for a denominator known to be nonzero.
    pub fn frac(num: i64, den: i64) -> Rational {
        Rational::new(num, den).expect("nonzero denominator")
    }

    pub fn int(v: i64) -> Rational {
        Rational::Finite(Ratio::from_integer(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Rational::Infinity)
    }

    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Rational::Finite(r) => Some(*r),
            Rational::Infinity => None,
        }
    }

    pub fn numer(&self) -> Option<i64> {
        self.finite().map(|r| *r.numer())
    }

    pub fn denom(&self) -> Option<i64> {
        self.finite().map(|r| *r.denom())
    }

    pub fn floor(&self) -> Option<i64> {
        self.finite().map(|r| r.floor().to_integer())
    }

    pub fn ceil(&self) -> Option<i64> {
        self.finite().map(|r| r.ceil().to_integer())
    }

    /// Sum with a finite value; `INFINITY` absorbs.
    pub fn add(&self, other: Rational) -> Rational {
        match (self, other) {
            (Rational::Finite(a), Rational::Finite(b)) => Rational::Finite(a + b),
            _ => Rational::Infinity,
        }
    }

    /// `n / (t + 1) - 1` for finite `t >= 0`; `-1` when `t` is infinite.
    pub fn degree_threshold(n: usize, t: Rational) -> Ratio<i64> {
        match t {
            Rational::Finite(t) => Ratio::from_integer(n as i64) / (t + 1) - 1,
            Rational::Infinity => Ratio::from_integer(-1),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Finite(a), Rational::Finite(b)) => a.cmp(b),
            (Rational::Finite(_), Rational::Infinity) => Ordering::Less,
            (Rational::Infinity, Rational::Finite(_)) => Ordering::Greater,
            (Rational::Infinity, Rational::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational::Finite(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Rational::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Rational::Infinity => f.write_str("INF"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Rational::Infinity);
        }
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| RationalError::Parse(s.to_string()));
        match t.split_once('/') {
            Some((a, b)) => Rational::new(parse(a)?, parse(b)?),
            None => Ok(Rational::int(parse(t)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_ordered() {
        let r = Rational::frac(6, -4);
        assert_eq!(r.numer(), Some(-3));
        assert_eq!(r.denom(), Some(2));
        assert!(Rational::int(1_000_000) < INFINITY);
        assert!(Rational::frac(1, 3) < Rational::frac(1, 2));
        assert_eq!(Rational::new(1, 0), Err(RationalError::ZeroDenominator));
    }

    #[test]
    fn parse_and_display() {
        for s in ["3/2", "15", "INF", "0"] {
            assert_eq!(s.parse::<Rational>().unwrap().to_string(), s);
        }
        assert_eq!("4/2".parse::<Rational>().unwrap(), Rational::int(2));
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn floor_ceil_threshold() {
        assert_eq!(Rational::frac(7, 2).floor(), Some(3));
        assert_eq!(Rational::frac(7, 2).ceil(), Some(4));
        // n/(t+1) - 1 with n = 10, t = 1 is 4.
        assert_eq!(Rational::degree_threshold(10, Rational::ONE), Ratio::from_integer(4));
    }
}
