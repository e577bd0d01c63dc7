use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::numeric::direct_product;
use super::ThetaKind;
use crate::error::{Error, Result};

const PRODUCT_EPS: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub samples: usize,
    pub max_discrepancy: f64,
    pub eps: f64,
    pub pass: bool,
}

impl LawReport {
    fn new(law: String, discrepancies: impl IntoIterator<Item = f64>, eps: f64) -> Self {
        let mut samples = 0;
        let mut max = 0.0f64;
        for d in discrepancies {
            samples += 1;
            max = if d.is_nan() { f64::INFINITY } else { max.max(d) };
        }
        Self {
            law,
            samples,
            max_discrepancy: max,
            eps,
            pass: max < eps,
        }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] samples={} max={:.3e} eps={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.law,
            self.samples,
            self.max_discrepancy,
            self.eps
        )
    }
}

/// `|l - r| / max(1, |l|, |r|)`.
pub fn relative_discrepancy(l: Complex64, r: Complex64) -> f64 {
    (l - r).norm() / 1f64.max(l.norm()).max(r.norm())
}

/// A point `(x, t, tau)` with `|Re tau| <= 1/2`, `Im tau` in `[0.5, 1.1]`,
/// and real-ish `x`, `t`.
#[derive(Clone, Copy, Debug)]
pub struct Sample {
    pub x: Complex64,
    pub t: Complex64,
    pub tau: Complex64,
}

pub fn samples(n: usize, seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Sample {
            x: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.1..0.1)),
            t: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.1..0.1)),
            tau: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..1.1)),
        })
        .collect()
}

/// `theta_kind(x + l(t + a tau + b)) = e^{-pi i (2 l a x + 2 l^2 a t + l^2 a^2 tau)} theta_kind(x + l t)`
/// for even `a`, `b`.
pub fn check_quasi_periodicity(
    kind: ThetaKind,
    l: i64,
    a: i64,
    b: i64,
    points: &[Sample],
    eps: f64,
) -> Result<LawReport> {
    if a % 2 != 0 || b % 2 != 0 {
        return Err(Error::InvalidData(format!("quasi-periodicity needs even a, b (got a={a}, b={b})")));
    }
    let (lf, af, bf) = (l as f64, a as f64, b as f64);
    let i = Complex64::i();
    let mut ds = Vec::with_capacity(points.len());
    for p in points {
        let lhs = direct_product(kind, p.x + lf * (p.t + af * p.tau + bf), p.tau, PRODUCT_EPS)?;
        let phase = (-PI * i * (2.0 * lf * af * p.x + 2.0 * lf * lf * af * p.t + lf * lf * af * af * p.tau)).exp();
        let rhs = phase * direct_product(kind, p.x + lf * p.t, p.tau, PRODUCT_EPS)?;
        ds.push(relative_discrepancy(lhs, rhs));
    }
    Ok(LawReport::new(format!("{kind} quasi-periodicity l={l} a={a} b={b}"), ds, eps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModularGenerator {
    S,
    T,
}

impl FromStr for ModularGenerator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(Self::S),
            "T" | "t" => Ok(Self::T),
            _ => Err(Error::Parse(format!("unknown generator `{s}` (S or T)"))),
        }
    }
}

/// The image kind and whether the odd function's extra `1/i` applies.
fn s_partner(kind: ThetaKind) -> ThetaKind {
    match kind {
        ThetaKind::Theta => ThetaKind::Theta,
        ThetaKind::Theta1 => ThetaKind::Theta2,
        ThetaKind::Theta2 => ThetaKind::Theta1,
        ThetaKind::Theta3 => ThetaKind::Theta3,
    }
}

fn t_partner(kind: ThetaKind) -> ThetaKind {
    match kind {
        ThetaKind::Theta2 => ThetaKind::Theta3,
        ThetaKind::Theta3 => ThetaKind::Theta2,
        k => k,
    }
}

/// One of the eight S/T transformation identities, with the principal
/// branch of `sqrt(tau / i)`.
pub fn check_modular_st(kind: ThetaKind, generator: ModularGenerator, points: &[Sample], eps: f64) -> Result<LawReport> {
    let i = Complex64::i();
    let mut ds = Vec::with_capacity(points.len());
    for p in points {
        let (t, tau) = (p.t, p.tau);
        let (lhs, rhs) = match generator {
            ModularGenerator::T => {
                let lhs = direct_product(kind, t, tau + 1.0, PRODUCT_EPS)?;
                let mult = if matches!(kind, ThetaKind::Theta | ThetaKind::Theta1) {
                    (PI * i / 4.0).exp()
                } else {
                    Complex64::new(1.0, 0.0)
                };
                (lhs, mult * direct_product(t_partner(kind), t, tau, PRODUCT_EPS)?)
            }
            ModularGenerator::S => {
                let lhs = direct_product(kind, t / tau, -tau.inv(), PRODUCT_EPS)?;
                let mut mult = (tau / i).sqrt() * (PI * i * t * t / tau).exp();
                if kind == ThetaKind::Theta {
                    mult /= i;
                }
                (lhs, mult * direct_product(s_partner(kind), t, tau, PRODUCT_EPS)?)
            }
        };
        ds.push(relative_discrepancy(lhs, rhs));
    }
    Ok(LawReport::new(format!("{kind} modular {generator:?}"), ds, eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_eight_identities_hold() {
        let pts = samples(10, 7);
        for kind in ThetaKind::ALL {
            for g in [ModularGenerator::S, ModularGenerator::T] {
                let r = check_modular_st(kind, g, &pts, 1e-9).unwrap();
                assert!(r.pass, "{r}");
            }
        }
    }

    #[test]
    fn quasi_periodicity_examples() {
        let pts = samples(10, 11);
        assert!(check_quasi_periodicity(ThetaKind::Theta1, 1, 0, 2, &pts, 1e-9).unwrap().pass);
        assert!(check_quasi_periodicity(ThetaKind::Theta, 2, 2, 0, &pts, 1e-9).unwrap().pass);
        let zero = check_quasi_periodicity(ThetaKind::Theta2, 0, 2, 2, &pts, 1e-9).unwrap();
        assert_eq!(zero.max_discrepancy, 0.0);
    }

    #[test]
    fn odd_a_is_rejected() {
        assert!(check_quasi_periodicity(ThetaKind::Theta, 1, 1, 0, &samples(1, 0), 1e-9).is_err());
    }
}
