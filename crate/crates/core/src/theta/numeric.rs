use std::f64::consts::PI;

use num_complex::Complex64;

use super::ThetaKind;
use crate::error::{Error, Result};

/// Below this `Im tau` the S-transformation is applied first.
pub const S_THRESHOLD: f64 = 0.3;

const MAX_FACTORS: usize = 10_000;

fn i() -> Complex64 {
    Complex64::i()
}

/// The product of each kind, truncated once the remaining factors change
/// the value by a relative amount below `eps`. No reduction is applied, so
/// this is the reference the transformation checkers compare against.
pub fn direct_product(kind: ThetaKind, t: Complex64, tau: Complex64, eps: f64) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::NonconvergentDomain(tau.im));
    }
    let q = (2.0 * PI * i() * tau).exp();
    let q_half = (PI * i() * tau).exp();
    let l = (2.0 * PI * i() * t).exp();
    let l_inv = l.inv();
    let r = q.norm();
    let m = l.norm().max(l_inv.norm());
    let half = matches!(kind, ThetaKind::Theta2 | ThetaKind::Theta3);
    let sign = if matches!(kind, ThetaKind::Theta | ThetaKind::Theta2) { -1.0 } else { 1.0 };

    let mut acc = match kind {
        ThetaKind::Theta => 2.0 * (PI * t).sin() * (2.0 * PI * i() * tau / 8.0).exp(),
        ThetaKind::Theta1 => 2.0 * (PI * t).cos() * (2.0 * PI * i() * tau / 8.0).exp(),
        _ => Complex64::new(1.0, 0.0),
    };
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=MAX_FACTORS {
        let prev_qn = qn;
        qn *= q;
        let qe = if half { prev_qn * q_half } else { qn };
        acc *= (1.0 - qn) * (1.0 + sign * qe * l) * (1.0 + sign * qe * l_inv);
        // Remaining factors: |log prod| <= sum_{j>n} (r^j + 2 M r^{j-1/2}) <= tail.
        let rn = r.powi(n as i32);
        let tail = (rn * r + 2.0 * m * rn * r.sqrt()) / (1.0 - r);
        if tail < 0.5 && tail.exp_m1() < eps * 0.1 {
            return Ok(acc);
        }
    }
    Err(Error::NonconvergentDomain(tau.im))
}

/// Shift `t` into the period parallelogram centered at zero, returning
/// the reduced argument and the multiplier for each kind.
fn reduce_t(t: Complex64, tau: Complex64) -> (Complex64, [Complex64; 4]) {
    let a = (t.im / tau.im).round();
    let t0 = t - a * tau;
    let b = t0.re.round();
    let t1 = t0 - b;
    let ai = a as i64;
    let bi = b as i64;
    let e = (-PI * i() * a * a * tau - 2.0 * PI * i() * a * t0).exp();
    let s_a = if ai.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    let s_b = if bi.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    (
        t1,
        [e * s_a * s_b, e * s_b, e * s_a, e],
    )
}

fn eval_inner(t: Complex64, tau: Complex64, eps: f64, depth: u32) -> Result<[Complex64; 4]> {
    if !(tau.im > 0.0) || !tau.is_finite() || !t.is_finite() {
        return Err(Error::NonconvergentDomain(tau.im));
    }
    if depth > 64 {
        return Err(Error::NonconvergentDomain(tau.im));
    }
    // T^k: tau = tau0 + k
    let k = tau.re.round();
    let tau0 = tau - k;
    let base = if tau0.im < S_THRESHOLD {
        let sigma = -tau0.inv();
        let t2 = t * sigma;
        let v = eval_inner(t2, sigma, eps, depth + 1)?;
        let pref = (sigma / i()).sqrt() * (PI * i() * t2 * t2 / sigma).exp();
        [-i() * pref * v[0], pref * v[2], pref * v[1], pref * v[3]]
    } else {
        let (t1, mult) = reduce_t(t, tau0);
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for kind in ThetaKind::ALL {
            out[kind.index()] = mult[kind.index()] * direct_product(kind, t1, tau0, eps)?;
        }
        out
    };
    let ki = k as i64;
    let tw = (PI * i() * k / 4.0).exp();
    let mut out = [base[0] * tw, base[1] * tw, base[2], base[3]];
    if ki.rem_euclid(2) == 1 {
        out.swap(2, 3);
    }
    Ok(out)
}

/// All four functions at `(t, tau)`, each within a relative `eps`.
pub fn eval_all(t: Complex64, tau: Complex64, eps: f64) -> Result<[Complex64; 4]> {
    eval_inner(t, tau, eps, 0)
}

pub fn theta_numeric(kind: ThetaKind, t: Complex64, tau: Complex64, eps: f64) -> Result<Complex64> {
    Ok(eval_all(t, tau, eps)?[kind.index()])
}

/// `theta'(0, tau)`, the `v`-derivative at the origin: Richardson
/// extrapolation of central differences, error `O(h^4)` with `h = 1e-3`.
pub fn theta_prime_zero(tau: Complex64, eps: f64) -> Result<Complex64> {
    let d = |h: f64| -> Result<Complex64> {
        let h = Complex64::new(h, 0.0);
        let f = |x| theta_numeric(ThetaKind::Theta, x, tau, eps);
        Ok((f(h)? - f(-h)?) / (2.0 * h))
    };
    let h = 1e-3;
    Ok((4.0 * d(h / 2.0)? - d(h)?) / 3.0)
}
