use std::fmt;

use super::{rat, Rat};
use crate::error::{Error, Result};

/// Integer or half-integer, stored as twice its value. Rotation weights on
/// the double cover of the circle take these values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_int(n: i64) -> Self {
        Self(2 * n)
    }

    pub fn from_twice(t: i64) -> Self {
        Self(t)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn to_rat(self) -> Rat {
        rat(self.0, 2)
    }

    /// Accepts `"3"`, `"-3/2"`, or a decimal with fractional part .5.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not an integer or half-integer"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "1" => Ok(Self(2 * n)),
                "2" => Ok(Self(n)),
                _ => Err(bad()),
            };
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Self(2 * n));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        Self::from_f64(x).ok_or_else(bad)
    }

    pub fn from_f64(x: f64) -> Option<Self> {
        let t = (2.0 * x).round();
        ((2.0 * x - t).abs() < 1e-12 && t.abs() < 1e15).then_some(Self(t as i64))
    }
}

impl std::ops::Neg for HalfInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl std::ops::Add for HalfInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl serde::Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(HalfInt::parse("3").unwrap(), HalfInt::from_int(3));
        assert_eq!(HalfInt::parse("-3/2").unwrap(), HalfInt::from_twice(-3));
        assert_eq!(HalfInt::parse("0.5").unwrap(), HalfInt::from_twice(1));
        assert!(HalfInt::parse("1/3").is_err());
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
    }
}
