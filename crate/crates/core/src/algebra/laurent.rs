use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Coeff, Rat, Ring};

/// Laurent polynomial in `w` with rational coefficients, where `w = z^{1/2}`
/// and `z = e^{2 pi i t}`.
///
/// Stored densely: `coeffs[i]` is the coefficient of `w^(low + i)`. The vector
/// never has zero entries at either end; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WLaurentPoly {
    low: i64,
    coeffs: Vec<Rat>,
}

impl WLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            low: exp,
            coeffs: vec![c],
        }
    }

    /// `w^exp` with coefficient one.
    pub fn w_pow(exp: i64) -> Self {
        Self::monomial(exp, Rat::one())
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rat)>,
    {
        let terms: Vec<(i64, Rat)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let low = terms.iter().map(|(e, _)| *e).min().unwrap();
        let high = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![Rat::zero(); (high - low + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += c;
        }
        Self::from_dense(low, coeffs)
    }

    pub fn from_ints(low: i64, coeffs: &[i64]) -> Self {
        Self::from_dense(low, coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub(crate) fn from_dense(mut low: i64, mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead_zeros);
        low += lead_zeros as i64;
        Self { low, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// Difference between highest and lowest exponent.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        if exp < self.low {
            return Rat::zero();
        }
        self.coeffs
            .get((exp - self.low) as usize)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        let low = self.low;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (low + i as i64, c))
    }

    /// The constant value, if the polynomial has no `w` dependence.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 if self.low == 0 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Monomial shape `c * w^e`.
    pub fn as_monomial(&self) -> Option<(i64, &Rat)> {
        (self.coeffs.len() == 1).then(|| (self.low, &self.coeffs[0]))
    }

    /// Multiply by `w^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Substitute `w -> w^k` for a nonzero integer `k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "substitution w -> w^0 collapses the ring");
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    /// Replace each coefficient `c_e` by `f(e) * c_e`.
    pub fn map_by_exponent(&self, f: impl Fn(i64) -> Rat) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * f(self.low + i as i64))
            .collect();
        Self::from_dense(self.low, coeffs)
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc * w.powi(self.low as i32)
    }

    pub fn eval_rat(&self, w: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc * pow_rat(w, self.low)
    }

    /// Divide by the unit `c * w^e` making this monic with lowest exponent zero.
    pub fn normalize_unit(&self) -> (Self, i64, Rat) {
        match self.leading_coeff() {
            None => (Self::zero(), 0, Rat::one()),
            Some(lc) => {
                let lc = lc.clone();
                let coeffs = self.coeffs.iter().map(|c| c / &lc).collect();
                (
                    Self {
                        low: 0,
                        coeffs,
                    },
                    self.low,
                    lc,
                )
            }
        }
    }

    /// Exact quotient by `divisor`; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact Laurent division");
        q
    }

    /// Long division of the polynomial parts, tracking the `w` shift.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let (num, d) = (&self.coeffs, &divisor.coeffs);
        if num.len() < d.len() {
            return (Self::zero(), self.clone());
        }
        let mut rem: Vec<Rat> = num.clone();
        let lead = d.last().unwrap();
        let qlen = num.len() - d.len() + 1;
        let mut quot = vec![Rat::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + d.len() - 1] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        rem.truncate(d.len() - 1);
        (
            Self::from_dense(self.low - divisor.low, quot),
            Self::from_dense(self.low, rem),
        )
    }

    /// Greatest common divisor up to units: monic, lowest exponent zero.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize_unit().0;
        }
        if other.is_zero() {
            return self.normalize_unit().0;
        }
        if self.coeffs.len() == 1 || other.coeffs.len() == 1 {
            return Self::one();
        }
        let a = primitive_int(&self.coeffs);
        let b = primitive_int(&other.coeffs);
        let g = int_poly_gcd(a, b);
        let lc = Rat::from_integer(g.last().unwrap().clone());
        Self::from_dense(0, g.into_iter().map(|c| Rat::from_integer(c) / &lc).collect())
    }

    /// Substitute `w -> w^{-1}`.
    pub fn invert_w(&self) -> Self {
        self.substitute_power(-1)
    }
}

fn pow_rat(w: &Rat, e: i64) -> Rat {
    let base = if e < 0 { w.recip() } else { w.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Clear denominators and divide out the content; leading coefficient positive.
fn primitive_int(coeffs: &[Rat]) -> Vec<BigInt> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c.numer() * &lcm) / c.denom())
        .collect();
    make_primitive(ints)
}

fn make_primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let content = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return p;
    }
    let sign = if p.last().unwrap().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let div = content * sign;
    p.iter().map(|c| c / &div).collect()
}

/// Pseudo-remainder of `a` by `b` over the integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Primitive polynomial remainder sequence gcd.
fn int_poly_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        if b.is_empty() {
            return make_primitive(a);
        }
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = make_primitive(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
}

impl Coeff for WLaurentPoly {
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

impl Ring for WLaurentPoly {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_exp().unwrap().max(rhs.high_exp().unwrap());
        let mut coeffs = vec![Rat::zero(); (high - low + 1) as usize];
        for (p, c) in [self, rhs]
            .into_iter()
            .flat_map(|p| p.coeffs.iter().enumerate().map(move |(i, c)| (p.low + i as i64, c)))
        {
            coeffs[(p - low) as usize] += c;
        }
        Self::from_dense(low, coeffs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::from_dense(self.low + rhs.low, coeffs)
    }
    fn neg(&self) -> Self {
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn try_inverse(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        Some(Self::monomial(-e, c.recip()))
    }
    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }
}

pub(crate) fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for WLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let terms: Vec<(i64, &Rat)> = self.terms().collect();
        for (e, c) in terms.into_iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match e.cmp(&0) {
                Ordering::Equal => String::new(),
                _ if e == 1 => "w".to_string(),
                _ => format!("w^{e}"),
            };
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{}", fmt_rat(&abs))?,
                (false, false) => write!(f, "{}*{mono}", fmt_rat(&abs))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WLaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(low: i64, c: &[i64]) -> WLaurentPoly {
        WLaurentPoly::from_ints(low, c)
    }

    #[test]
    fn trims_zero_ends() {
        let a = p(-2, &[0, 0, 1, 2, 0]);
        assert_eq!(a.low_exp(), Some(0));
        assert_eq!(a.high_exp(), Some(1));
        assert!(p(3, &[0, 0]).is_zero());
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (w^2 - 1)(w + 2) and (w^2 - 1)(w - 3) share w^2 - 1
        let f = p(0, &[-1, 0, 1]);
        let a = f.mul(&p(0, &[2, 1]));
        let b = f.mul(&p(0, &[-3, 1])).shift(-5);
        assert_eq!(a.gcd(&b), f);
        assert_eq!(p(0, &[1, 1]).gcd(&p(0, &[-1, 1])), WLaurentPoly::one());
    }

    #[test]
    fn exact_division_round_trips() {
        let a = p(-1, &[3, 0, -2, 5]);
        let b = p(2, &[1, 1]);
        assert_eq!(a.mul(&b).div_exact(&b), a);
    }

    #[test]
    fn display_orders_terms_high_to_low() {
        assert_eq!(p(-1, &[-1, 0, 1]).to_string(), "w - w^-1");
        let c = WLaurentPoly::from_terms([(2, Rat::new(2.into(), 3.into())), (0, Rat::from_integer((-1).into()))]);
        assert_eq!(c.to_string(), "2/3*w^2 - 1");
    }

    #[test]
    fn eval_matches_manual_sum() {
        let a = p(-1, &[1, 0, 1]);
        let w = Complex64::from_polar(1.0, 0.3);
        let expect = w + w.inv();
        assert!((a.eval(w) - expect).norm() < 1e-14);
    }
}
