use std::fmt::Debug;

use num_traits::{One, Zero};

use super::Rat;

/// Commutative ring with exact arithmetic.
///
/// Elements build their own zero and one (`zero_like`, `one_like`) because
/// some rings carry context, such as the generator table of a graded element.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, when one exists.
    fn try_inverse(&self) -> Option<Self>;
    fn scale(&self, r: &Rat) -> Self;

    fn add_assign(&mut self, rhs: &Self) {
        *self = Ring::add(&*self, rhs);
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A ring that needs no context to build its constants; usable as the
/// coefficient ring of graded elements and q-series.
pub trait Coeff: Ring + std::fmt::Display {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn from_rat(r: &Rat) -> Self;
}

impl Coeff for Rat {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
}
