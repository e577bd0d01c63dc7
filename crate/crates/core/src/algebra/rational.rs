use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;


use super::{Coeff, Rat, Ring, WLaurentPoly};

/// Reduced quotient of Laurent polynomials in `w`.
///
/// Canonical form: `gcd(num, den) = 1`, and `den` is monic with lowest
/// exponent 0. Two values are equal iff their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WLaurentRational {
    num: WLaurentPoly,
    den: WLaurentPoly,
}

impl Default for WLaurentRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl WLaurentRational {
    pub fn zero() -> Self {
        Self {
            num: WLaurentPoly::zero(),
            den: WLaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(WLaurentPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(WLaurentPoly::constant(c))
    }

    pub fn w_pow(e: i64) -> Self {
        Self::from_poly(WLaurentPoly::w_pow(e))
    }

    pub fn from_poly(p: WLaurentPoly) -> Self {
        Self {
            num: p,
            den: WLaurentPoly::one(),
        }
    }

    /// `num / den` in reduced form; `None` when `den` is zero.
    pub fn new(num: WLaurentPoly, den: WLaurentPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    fn reduce(num: WLaurentPoly, den: WLaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.span() == 0 {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        let (den, shift, lc) = den.normalize_unit();
        let num = num.shift(-shift).scale(&lc.recip());
        Self { num, den }
    }

    pub fn numer(&self) -> &WLaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &WLaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The rational constant, if this value does not depend on `w`.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// Multiply by `w^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    /// Substitute `w -> w^{-1}`.
    pub fn invert_w(&self) -> Self {
        Self::reduce(self.num.invert_w(), self.den.invert_w())
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.num.eval(w) / self.den.eval(w)
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.try_inverse().map(|inv| self.mul(&inv))
    }
}

impl Coeff for WLaurentRational {
    fn zero_elem() -> Self {
        Self::zero()
    }
    fn one_elem() -> Self {
        Self::one()
    }
    fn from_rat(r: &Rat) -> Self {
        Self::constant(r.clone())
    }
}

impl Ring for WLaurentRational {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        if self.den.is_one() {
            return Self::reduce(self.num.mul(&rhs.den).add(&rhs.num), rhs.den.clone());
        }
        if rhs.den.is_one() {
            return Self::reduce(self.num.add(&rhs.num.mul(&self.den)), self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a_cof = rhs.den.div_exact(&g);
        let b_cof = self.den.div_exact(&g);
        let num = self.num.mul(&a_cof).add(&rhs.num.mul(&b_cof));
        Self::reduce(num, self.den.mul(&a_cof))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        // Cross-cancel first so the products stay small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (an, bd) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1), rhs.den.div_exact(&g1))
        };
        let (bn, ad) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        let num = an.mul(&bn);
        let den = ad.mul(&bd);
        let (den, shift, lc) = den.normalize_unit();
        Self {
            num: num.shift(-shift).scale(&lc.recip()),
            den,
        }
    }
    fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (num, shift, lc) = self.num.normalize_unit();
        Some(Self {
            num: self.den.shift(-shift).scale(&lc.recip()),
            den: num,
        })
    }
    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }
}

impl From<WLaurentPoly> for WLaurentRational {
    fn from(p: WLaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl From<Rat> for WLaurentRational {
    fn from(r: Rat) -> Self {
        Self::constant(r)
    }
}

impl fmt::Display for WLaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &WLaurentPoly| {
            if p.terms().count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for WLaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WLaurentRational({self})")
    }
}
