//! Exact coefficient rings and truncated series.

mod graded;
mod halfint;
mod laurent;
mod qseries;
mod rational;
mod ring;

pub use graded::{fiber_integrate, graded_exp, graded_mul, Graded, GradedElement, GradedSpace, IntegrationTable, WGraded};
pub use halfint::HalfInt;
pub use laurent::WLaurentPoly;
pub use qseries::{series_invert, series_mul, QSeries};
pub use rational::WLaurentRational;
pub use ring::{Coeff, Ring};

pub(crate) use laurent::fmt_rat;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational of the form p/q"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("`{s}` has a zero denominator")));
    }
    Ok(Rat::new(n, d))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn rat_string(r: &Rat) -> String {
    fmt_rat(r)
}

pub fn factorial(k: u32) -> Rat {
    (1..=k).fold(Rat::one(), |acc, j| acc * int(j as i64))
}
