use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{int, rat, Rat};

/// Transcendental and imaginary constants kept out of the rational
/// coefficients: `(2 pi)^two_pi * i^i_pow * 2^two`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Ledger {
    pub two_pi: i64,
    pub i_pow: u8,
    pub two: i64,
}

impl Ledger {
    pub const ONE: Ledger = Ledger {
        two_pi: 0,
        i_pow: 0,
        two: 0,
    };

    pub fn two_pi(k: i64) -> Self {
        Self {
            two_pi: k,
            ..Self::ONE
        }
    }

    pub fn i(k: i64) -> Self {
        Self {
            i_pow: k.rem_euclid(4) as u8,
            ..Self::ONE
        }
    }

    pub fn two(k: i64) -> Self {
        Self {
            two: k,
            ..Self::ONE
        }
    }

    pub fn mul(self, o: Self) -> Self {
        Self {
            two_pi: self.two_pi + o.two_pi,
            i_pow: (self.i_pow + o.i_pow) % 4,
            two: self.two + o.two,
        }
    }

    pub fn inv(self) -> Self {
        Self {
            two_pi: -self.two_pi,
            i_pow: (4 - self.i_pow) % 4,
            two: -self.two,
        }
    }

    pub fn pow(self, k: i64) -> Self {
        Self {
            two_pi: self.two_pi * k,
            i_pow: (self.i_pow as i64 * k).rem_euclid(4) as u8,
            two: self.two * k,
        }
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn value(self) -> Complex64 {
        let i = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][self.i_pow as usize];
        i * (2.0 * PI).powi(self.two_pi as i32) * 2f64.powi(self.two as i32)
    }

    /// Split off the rational part: `self = r * canonical`, where the
    /// canonical ledger has `i_pow` in {0, 1} and no power of two.
    pub fn canonical(self) -> (Rat, Ledger) {
        let mut r = if self.two >= 0 {
            int(1i64 << self.two.min(62))
        } else {
            rat(1, 1i64 << (-self.two).min(62))
        };
        if self.i_pow >= 2 {
            r = -r;
        }
        (
            r,
            Ledger {
                two_pi: self.two_pi,
                i_pow: self.i_pow % 2,
                two: 0,
            },
        )
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.two_pi != 0 {
            parts.push(format!("(2pi)^{}", self.two_pi));
        }
        match self.i_pow {
            0 => {}
            1 => parts.push("i".into()),
            2 => parts.push("-1".into()),
            _ => parts.push("-i".into()),
        }
        if self.two != 0 {
            parts.push(format!("2^{}", self.two));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ledger({self})")
    }
}

/// Factors pulled out of a payload series:
/// `q^{q8/8} * c(q)^c_pow * w^{w_half/2} * ledger`, with `c(q) = prod (1 - q^n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug, Serialize)]
pub struct Prefactor {
    pub q8: i64,
    pub c_pow: i64,
    pub w_half: i64,
    pub ledger: Ledger,
}

impl Prefactor {
    pub const ONE: Prefactor = Prefactor {
        q8: 0,
        c_pow: 0,
        w_half: 0,
        ledger: Ledger::ONE,
    };

    pub fn mul(self, o: Self) -> Self {
        Self {
            q8: self.q8 + o.q8,
            c_pow: self.c_pow + o.c_pow,
            w_half: self.w_half + o.w_half,
            ledger: self.ledger.mul(o.ledger),
        }
    }

    pub fn inv(self) -> Self {
        Self {
            q8: -self.q8,
            c_pow: -self.c_pow,
            w_half: -self.w_half,
            ledger: self.ledger.inv(),
        }
    }

    pub fn pow(self, k: i64) -> Self {
        Self {
            q8: self.q8 * k,
            c_pow: self.c_pow * k,
            w_half: self.w_half * k,
            ledger: self.ledger.pow(k),
        }
    }

    pub fn with_ledger(ledger: Ledger) -> Self {
        Self {
            ledger,
            ..Self::ONE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_folds_sign_and_twos() {
        let l = Ledger::i(3).mul(Ledger::two(-2)).mul(Ledger::two_pi(1));
        let (r, c) = l.canonical();
        assert_eq!(r, rat(-1, 4));
        assert_eq!(c, Ledger { two_pi: 1, i_pow: 1, two: 0 });
        assert!((l.value() - c.value() * 0.25 * -1.0).norm() < 1e-12);
    }

    #[test]
    fn inverse_cancels() {
        let l = Ledger::i(1).mul(Ledger::two(3)).mul(Ledger::two_pi(-2));
        assert!(l.mul(l.inv()).is_one());
        assert_eq!(l.pow(4).i_pow, 0);
    }
}
