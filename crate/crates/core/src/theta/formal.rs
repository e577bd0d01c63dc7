use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::ledger::{Ledger, Prefactor};
use crate::algebra::{
    factorial, int, rat, series_invert, series_mul, Coeff, GradedElement, HalfInt, QSeries, Rat, Ring, WGraded,
    WLaurentPoly, WLaurentRational,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaKind {
    Theta,
    Theta1,
    Theta2,
    Theta3,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3];

    pub fn name(self) -> &'static str {
        match self {
            ThetaKind::Theta => "theta",
            ThetaKind::Theta1 => "theta1",
            ThetaKind::Theta2 => "theta2",
            ThetaKind::Theta3 => "theta3",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Whether the function carries the `sin`/`cos` factor, hence an `L^{-1/2}`.
    fn has_half_power(self) -> bool {
        matches!(self, ThetaKind::Theta | ThetaKind::Theta1)
    }

    /// `q^{1/8}`, `c(q)` and the `-i` of `2 sin(pi v) = -i (L^{1/2} - L^{-1/2})`.
    pub(crate) fn base_prefactor(self) -> Prefactor {
        let q8 = if self.has_half_power() { 1 } else { 0 };
        let ledger = if self == ThetaKind::Theta { Ledger::i(3) } else { Ledger::ONE };
        Prefactor {
            q8,
            c_pow: 1,
            w_half: 0,
            ledger,
        }
    }

    pub fn is_odd(self) -> bool {
        self == ThetaKind::Theta
    }
}

impl fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ThetaKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ThetaKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown theta kind `{s}` (theta, theta1, theta2, theta3)")))
    }
}

/// `c(q) = prod_{n>=1} (1 - q^n)` through `q^{n8/8}`.
pub fn c_series(n8: i64) -> QSeries<Rat> {
    let mut acc = QSeries::monomial(0, Rat::one(), n8);
    let mut n = 1;
    while 8 * n <= n8 {
        acc = series_mul(&acc, &QSeries::from_terms([(0, int(1)), (8 * n, int(-1))], n8));
        n += 1;
    }
    acc
}

/// `c(q)^k` for any integer `k`.
pub fn c_power(k: i64, n8: i64) -> QSeries<Rat> {
    let c = c_series(n8);
    let base = if k < 0 { series_invert(&c).expect("c(q) has constant term 1") } else { c };
    base.pow(k.unsigned_abs() as u32, Rat::one())
}

/// Product part of each kind as a series whose coefficients are Laurent
/// polynomials in `L = e^{2 pi i v}` (the `WLaurentPoly` variable here is `L`).
/// theta: `(L - 1) P-`, theta1: `(L + 1) P+`, theta2: `H-`, theta3: `H+`.
pub(crate) fn l_product(kind: ThetaKind, n8: i64) -> QSeries<WLaurentPoly> {
    let (sign, half) = match kind {
        ThetaKind::Theta => (-1, false),
        ThetaKind::Theta1 => (1, false),
        ThetaKind::Theta2 => (-1, true),
        ThetaKind::Theta3 => (1, true),
    };
    let lead = match kind {
        ThetaKind::Theta => WLaurentPoly::from_ints(0, &[-1, 1]),
        ThetaKind::Theta1 => WLaurentPoly::from_ints(0, &[1, 1]),
        _ => WLaurentPoly::one(),
    };
    let mut acc = QSeries::monomial(0, lead, n8);
    let mut n = 1;
    loop {
        let e = if half { 8 * n - 4 } else { 8 * n };
        if e > n8 {
            break;
        }
        // (1 + s q^e L)(1 + s q^e / L) = 1 + s q^e (L + 1/L) + q^{2e}
        let factor = QSeries::from_terms(
            [
                (0, WLaurentPoly::one()),
                (e, WLaurentPoly::from_ints(-1, &[sign, 0, sign])),
                (2 * e, WLaurentPoly::one()),
            ],
            n8,
        );
        acc = series_mul(&acc, &factor);
        n += 1;
    }
    acc
}

/// Normalized Taylor coefficients of a theta function around `v = m t`.
///
/// With `x` a Chern root (the `2 pi i` already absorbed) and
/// `D = (2 pi i)^{-1} d/dv`,
/// `theta_kind(m t + x / 2 pi i) = prefactor * sum_k entries[k] x^k / k!`.
#[derive(Clone, Debug)]
pub struct ThetaTaylorStack {
    pub kind: ThetaKind,
    pub m: HalfInt,
    pub entries: Vec<QSeries<WLaurentRational>>,
    pub prefactor: Prefactor,
    /// Set for `theta` at `m = 0`, where entry 0 vanishes identically.
    pub order_one_zero: bool,
}

/// Fold `w^{offset_half / 2}` into an integer `w` shift plus a parity bit.
fn split_half(offset_half: i64) -> (i64, i64) {
    (offset_half.div_euclid(2), offset_half.rem_euclid(2))
}

pub(crate) fn stack_from_product(
    kind: ThetaKind,
    m: HalfInt,
    k_max: usize,
    product: &QSeries<WLaurentPoly>,
) -> ThetaTaylorStack {
    let s = if kind.has_half_power() { rat(1, 2) } else { Rat::zero() };
    let offset_half = if kind.has_half_power() { -m.twice() } else { 0 };
    let (fold, w_half) = split_half(offset_half);
    let two_m = m.twice();
    let entries = (0..=k_max)
        .map(|k| {
            product.map(|p| {
                let terms = p.terms().map(|(j, c)| {
                    let weight = num_traits::pow(int(j) - &s, k);
                    (two_m * j + fold, c * weight)
                });
                WLaurentRational::from_poly(WLaurentPoly::from_terms(terms))
            })
        })
        .collect();
    let mut prefactor = kind.base_prefactor();
    prefactor.w_half = w_half;
    ThetaTaylorStack {
        kind,
        m,
        entries,
        prefactor,
        order_one_zero: kind == ThetaKind::Theta && m.is_zero(),
    }
}

/// Stack whose entries are truncated at `payload_n8` before the prefactor
/// `q^{q8/8}` is applied.
pub fn theta_taylor_payload(kind: ThetaKind, m: HalfInt, k_max: usize, payload_n8: i64) -> ThetaTaylorStack {
    stack_from_product(kind, m, k_max, &l_product(kind, payload_n8))
}

/// Stack for the function truncated at `q^{n8/8}` (prefactor included).
pub fn theta_taylor(kind: ThetaKind, m: HalfInt, k_max: usize, n8: i64) -> ThetaTaylorStack {
    let q8 = kind.base_prefactor().q8;
    theta_taylor_payload(kind, m, k_max, n8 - q8)
}

impl ThetaTaylorStack {
    pub fn k_max(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn payload_n8(&self) -> i64 {
        self.entries[0].n8()
    }

    /// For `theta` at `m = 0`: the stack of `theta(x) / x`, i.e.
    /// entries `E_{k+1} / (k+1)`.
    pub fn order_one_quotient(&self) -> Option<ThetaTaylorStack> {
        if !self.order_one_zero || self.entries.len() < 2 {
            return None;
        }
        let entries = self.entries[1..]
            .iter()
            .enumerate()
            .map(|(k, e)| e.scale(&rat(1, k as i64 + 1)))
            .collect();
        Some(ThetaTaylorStack {
            kind: self.kind,
            m: self.m,
            entries,
            prefactor: self.prefactor,
            order_one_zero: false,
        })
    }

    /// `sum_k entries[k] * root^k / k!` as a series of graded elements.
    pub fn substitute(&self, root: &GradedElement) -> Result<QSeries<WGraded>> {
        let space = root.space();
        let mut powers: Vec<GradedElement> = vec![GradedElement::one(space)];
        loop {
            let next = powers.last().unwrap().mul(root);
            if next.is_zero_elem() {
                break;
            }
            if powers.len() > self.k_max() {
                return Err(Error::InvalidData(format!(
                    "theta stack of depth {} is too short for the degree cap {}",
                    self.k_max(),
                    space.cap()
                )));
            }
            powers.push(next);
        }
        let powers: Vec<GradedElement> = powers
            .into_iter()
            .enumerate()
            .map(|(k, p)| p.scale(&factorial(k as u32).recip()))
            .collect();
        let mut out = QSeries::zero(self.payload_n8());
        for (k, p) in powers.iter().enumerate() {
            let lifted: WGraded = p.lift();
            out = out.add(&self.entries[k].map(|c| lifted.mul_coeff(c)));
        }
        Ok(out)
    }
}

/// Full q-expansion of `theta_kind(m t, tau)` with `c(q)` and `q^{1/8}`
/// multiplied in. The `-i` of `theta` stays in the ledger and a possible
/// leftover `w^{1/2}` in `w_half`.
#[derive(Clone, Debug)]
pub struct ThetaExpansion {
    pub kind: ThetaKind,
    pub m: HalfInt,
    pub series: QSeries<WLaurentRational>,
    pub w_half: i64,
    pub ledger: Ledger,
    pub vanishes_identically: bool,
}

impl ThetaExpansion {
    /// Numeric value at `w = e^{pi i t}`, `q^{1/8} = e^{2 pi i tau / 8}`.
    pub fn eval(&self, t: Complex64, tau: Complex64) -> Complex64 {
        let i = Complex64::i();
        let w = (i * std::f64::consts::PI * t).exp();
        let q8 = (2.0 * std::f64::consts::PI * i * tau / 8.0).exp();
        let half = (i * std::f64::consts::PI * t / 2.0).exp().powi(self.w_half as i32);
        self.series.eval_with(q8, |c| c.eval(w)) * half * self.ledger.value()
    }
}

pub fn theta_formal(kind: ThetaKind, m: HalfInt, n8: i64) -> ThetaExpansion {
    let base = kind.base_prefactor();
    let (fold, w_half) = split_half(if kind.has_half_power() { -m.twice() } else { 0 });
    let payload_n8 = n8 - base.q8;
    let product = l_product(kind, payload_n8);
    let two_m = m.twice();
    // Substitute L = w^{2m} first, then multiply in c(q), q^{1/8} and w^{-m}.
    let in_w: QSeries<WLaurentPoly> = product.map(|p| {
        WLaurentPoly::from_terms(p.terms().map(|(j, c)| (two_m * j, c.clone()))).shift(fold)
    });
    let c = c_series(payload_n8).map(|r| WLaurentPoly::from_rat(r));
    let full = series_mul(&in_w, &c).shift(base.q8);
    let series = full.map(|p| WLaurentRational::from_poly(p.clone()));
    ThetaExpansion {
        kind,
        m,
        vanishes_identically: series.is_zero(),
        series,
        w_half,
        ledger: base.ledger,
    }
}
