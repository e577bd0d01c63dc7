use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

use super::{Rat, Ring};
use crate::error::{Error, Result};

/// Truncated series in `q^{1/8}`: key `n` is the coefficient of `q^{n/8}`.
/// Every coefficient with `n > n8` is unknown and never stored.
#[derive(Clone, PartialEq)]
pub struct QSeries<C> {
    terms: BTreeMap<i64, C>,
    n8: i64,
}

impl<C: Ring> QSeries<C> {
    pub fn zero(n8: i64) -> Self {
        Self {
            terms: BTreeMap::new(),
            n8,
        }
    }

    pub fn monomial(exp: i64, c: C, n8: i64) -> Self {
        Self::from_terms([(exp, c)], n8)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I, n8: i64) -> Self {
        let mut out = Self::zero(n8);
        for (e, c) in terms {
            if e > n8 || c.is_zero_elem() {
                continue;
            }
            match out.terms.get_mut(&e) {
                Some(slot) => {
                    slot.add_assign(&c);
                    if slot.is_zero_elem() {
                        out.terms.remove(&e);
                    }
                }
                None => {
                    out.terms.insert(e, c);
                }
            }
        }
        out
    }

    pub fn n8(&self) -> i64 {
        self.n8
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> Option<&C> {
        self.terms.get(&exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest stored exponent.
    pub fn val(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Lower bound on the valuation, counting an all-zero series as
    /// vanishing through its truncation order.
    fn val_bound(&self) -> i64 {
        self.val().unwrap_or(self.n8 + 1)
    }

    pub fn truncate(&self, n8: i64) -> Self {
        let n8 = n8.min(self.n8);
        Self {
            terms: self.terms.range(..=n8).map(|(e, c)| (*e, c.clone())).collect(),
            n8,
        }
    }

    /// Multiply by `q^{k/8}`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            n8: self.n8 + k,
        }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        QSeries::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))), self.n8)
    }

    pub fn try_map<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<QSeries<D>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((*e, f(c)?));
        }
        Ok(QSeries::from_terms(terms, self.n8))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n8 = self.n8.min(rhs.n8);
        Self::from_terms(
            self.terms
                .range(..=n8)
                .chain(rhs.terms.range(..=n8))
                .map(|(e, c)| (*e, c.clone())),
            n8,
        )
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        self.map(|c| c.scale(r))
    }

    /// Multiply every coefficient by the ring element `c`.
    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Largest exponent `e` with all coefficients through `e` known.
    pub fn known_through(&self) -> i64 {
        self.n8
    }

    pub fn pow(&self, e: u32, one: C) -> Self {
        let mut acc = QSeries::monomial(0, one, self.n8);
        for _ in 0..e {
            acc = series_mul(&acc, self);
        }
        acc
    }

    /// Numeric value, given `q^{1/8}` and a coefficient evaluator.
    pub fn eval_with(&self, q8: Complex64, f: impl Fn(&C) -> Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| f(c) * q8.powi(*e as i32))
            .sum()
    }
}

/// Cauchy product, known through `min(a.n8, b.n8)` and never beyond what the
/// operand valuations certify.
pub fn series_mul<C: Ring>(a: &QSeries<C>, b: &QSeries<C>) -> QSeries<C> {
    let n8 = a
        .n8
        .min(b.n8)
        .min(a.n8 + b.val_bound())
        .min(b.n8 + a.val_bound());
    let at: Vec<(i64, &C)> = a.terms().collect();
    let bt: Vec<(i64, &C)> = b.terms().collect();
    let mut targets: Vec<i64> = at
        .iter()
        .flat_map(|(ea, _)| bt.iter().map(move |(eb, _)| ea + eb))
        .filter(|e| *e <= n8)
        .collect();
    targets.sort_unstable();
    targets.dedup();
    let coeff_at = |n: &i64| -> (i64, Option<C>) {
        let mut acc: Option<C> = None;
        for (ea, ca) in &at {
            let eb = n - ea;
            if let Some(cb) = b.terms.get(&eb) {
                let prod = ca.mul(cb);
                match acc.as_mut() {
                    Some(s) => s.add_assign(&prod),
                    None => acc = Some(prod),
                }
            }
        }
        (*n, acc)
    };
    #[cfg(feature = "parallel")]
    let computed: Vec<(i64, Option<C>)> = {
        use rayon::prelude::*;
        targets.par_iter().map(coeff_at).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let computed: Vec<(i64, Option<C>)> = targets.iter().map(coeff_at).collect();
    QSeries::from_terms(computed.into_iter().filter_map(|(e, c)| c.map(|c| (e, c))), n8)
}

/// Multiplicative inverse. With lowest exponent `v`, the result has lowest
/// exponent `-v` and is known through `n8 - 2v`.
pub fn series_invert<C: Ring>(a: &QSeries<C>) -> Result<QSeries<C>> {
    let v = a.val().ok_or(Error::NonInvertibleLeadingCoefficient)?;
    let a0 = a.terms[&v].clone();
    let inv0 = a0.try_inverse().ok_or(Error::NonInvertibleLeadingCoefficient)?;
    let n8 = a.n8 - 2 * v;
    let step = a.terms.keys().map(|e| e - v).fold(0i64, |g, d| g.gcd(&d)).max(1);
    let rel: Vec<(i64, &C)> = a.terms.iter().skip(1).map(|(e, c)| (e - v, c)).collect();
    let top = n8 + v; // last relative index needed
    let mut out: BTreeMap<i64, C> = BTreeMap::new();
    out.insert(0, inv0.clone());
    let neg_inv0 = inv0.neg();
    let mut n = step;
    while n <= top {
        let mut acc: Option<C> = None;
        for (j, bj) in &rel {
            if *j > n {
                break;
            }
            if let Some(c) = out.get(&(n - j)) {
                let prod = bj.mul(c);
                match acc.as_mut() {
                    Some(s) => s.add_assign(&prod),
                    None => acc = Some(prod),
                }
            }
        }
        if let Some(acc) = acc {
            let c = acc.mul(&neg_inv0);
            if !c.is_zero_elem() {
                out.insert(n, c);
            }
        }
        n += step;
    }
    Ok(QSeries::from_terms(out.into_iter().map(|(k, c)| (k - v, c)), n8))
}

impl<C: Ring + fmt::Display> fmt::Display for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("[{c}] q^({e}/8)"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        write!(f, " + O(q^({}/8))", self.n8 + 1)
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}
