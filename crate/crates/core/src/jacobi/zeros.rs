//! Argument-principle zero counting over a period parallelogram.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// `max |F|` over the 16x16 interior grid below this means `F = 0`.
pub const IDENTICALLY_ZERO_FLOOR: f64 = 1e-10;

const INITIAL_PANELS: usize = 32;
const MAX_SPLITS: u32 = 24;
const MAX_PERTURBATIONS: usize = 3;

/// 8-point Gauss–Legendre nodes and weights on `[-1, 1]`.
const GL_NODES: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

/// The parallelogram `origin + s v1 + u v2`, `s, u in [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cell {
    #[serde(serialize_with = "ser_complex")]
    pub origin: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub v1: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub v2: Complex64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl Cell {
    /// The `(2Z)^2` cell `2Z tau + 2Z`, centered near the origin and
    /// nudged off the half-lattice where theta quotients tend to vanish.
    pub fn two_z(tau: Complex64) -> Self {
        Self::centered(Complex64::new(2.0, 0.0), tau * 2.0)
    }

    pub fn unit(tau: Complex64) -> Self {
        Self::centered(Complex64::new(1.0, 0.0), tau)
    }

    fn centered(v1: Complex64, v2: Complex64) -> Self {
        let nudge = v1 * Complex64::new(0.0371, 0.0) + v2 * Complex64::new(0.0229, 0.0);
        Self {
            origin: -(v1 + v2) / 2.0 + nudge,
            v1,
            v2,
        }
    }

    fn at(&self, s: f64, u: f64) -> Complex64 {
        self.origin + self.v1 * s + self.v2 * u
    }

    fn edges(&self) -> [(Complex64, Complex64); 4] {
        let a = self.origin;
        let b = a + self.v1;
        let c = b + self.v2;
        let d = a + self.v2;
        [(a, b), (b, c), (c, d), (d, a)]
    }

    fn shifted(&self, attempt: usize) -> Self {
        let k = attempt as f64;
        Self {
            origin: self.origin + self.v1 * (0.0113 * k) + self.v2 * (0.0067 * k),
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome")]
pub enum ZeroCount {
    Count {
        value: f64,
        /// Origin perturbations needed to clear the boundary.
        perturbations: usize,
        panels: usize,
    },
    IdenticallyZero {
        max_abs: f64,
    },
}

impl ZeroCount {
    /// The nearest integer, when within `0.2` of one.
    pub fn rounded(&self) -> Option<i64> {
        match self {
            ZeroCount::Count { value, .. } if (value - value.round()).abs() <= 0.2 => Some(value.round() as i64),
            _ => None,
        }
    }
}

type Fun<'a> = dyn Fn(Complex64) -> Result<Complex64> + Sync + 'a;

fn sample(f: &Fun<'_>, z: Complex64) -> Result<Complex64> {
    let v = f(z)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSample(format!("{z}")))
    }
}

/// A boundary point is a zero if `|F|` falls below `tol * scale` or the
/// phase refuses to settle.
struct BoundaryHit;

/// Split `[z0, z1]` into panels over which the phase of `F` moves by at
/// most `pi/2`.
fn panels(
    f: &Fun<'_>,
    z0: Complex64,
    z1: Complex64,
    floor: f64,
) -> Result<std::result::Result<Vec<(Complex64, Complex64)>, BoundaryHit>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Complex64, Complex64, Complex64, Complex64, u32)> = Vec::new();
    let nodes: Vec<Complex64> = (0..=INITIAL_PANELS)
        .map(|j| z0 + (z1 - z0) * (j as f64 / INITIAL_PANELS as f64))
        .collect();
    let values: Vec<Complex64> = nodes.iter().map(|z| sample(f, *z)).collect::<Result<_>>()?;
    if values.iter().any(|v| v.norm() < floor) {
        return Ok(Err(BoundaryHit));
    }
    for j in (0..INITIAL_PANELS).rev() {
        stack.push((nodes[j], nodes[j + 1], values[j], values[j + 1], 0));
    }
    while let Some((a, b, fa, fb, depth)) = stack.pop() {
        if (fb / fa).arg().abs() <= PI / 2.0 {
            out.push((a, b));
            continue;
        }
        if depth >= MAX_SPLITS {
            return Ok(Err(BoundaryHit));
        }
        let m = (a + b) / 2.0;
        let fm = sample(f, m)?;
        if fm.norm() < floor {
            return Ok(Err(BoundaryHit));
        }
        stack.push((m, b, fm, fb, depth + 1));
        stack.push((a, m, fa, fm, depth + 1));
    }
    Ok(Ok(out))
}

/// `int F'/F` over one panel, `F'` by central differences.
fn panel_integral(f: &Fun<'_>, a: Complex64, b: Complex64) -> Result<Complex64> {
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    let h = half.norm().max(1e-12) * 1e-4;
    let dir = half / half.norm();
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in GL_NODES {
        let z = mid + half * x;
        let fz = sample(f, z)?;
        let fp = (sample(f, z + dir * h)? - sample(f, z - dir * h)?) / (dir * (2.0 * h));
        acc += fp / fz * w;
    }
    Ok(acc * half)
}

/// `(1/2 pi i) oint F'/F` around `cell`, or `IdenticallyZero` when the
/// 16x16 interior grid stays below `eps`.
pub fn count_zeros(f: &Fun<'_>, tau: Complex64, cell: Cell, eps: f64) -> Result<ZeroCount> {
    if !(tau.im > 0.0) {
        return Err(Error::NonconvergentDomain(tau.im));
    }
    let mut max_abs = 0.0f64;
    for i in 0..16 {
        for j in 0..16 {
            let z = cell.at((i as f64 + 0.5) / 16.0, (j as f64 + 0.5) / 16.0);
            max_abs = max_abs.max(sample(f, z)?.norm());
        }
    }
    if max_abs < eps {
        return Ok(ZeroCount::IdenticallyZero { max_abs });
    }
    let floor = max_abs * 1e-9;
    for attempt in 0..=MAX_PERTURBATIONS {
        let c = cell.shifted(attempt);
        let mut all = Vec::new();
        let mut hit = false;
        for (z0, z1) in c.edges() {
            match panels(f, z0, z1, floor)? {
                Ok(p) => all.extend(p),
                Err(BoundaryHit) => {
                    hit = true;
                    break;
                }
            }
        }
        if hit {
            continue;
        }
        #[cfg(feature = "parallel")]
        let parts: Vec<Complex64> = {
            use rayon::prelude::*;
            all.par_iter().map(|(a, b)| panel_integral(f, *a, *b)).collect::<Result<_>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let parts: Vec<Complex64> = all.iter().map(|(a, b)| panel_integral(f, *a, *b)).collect::<Result<_>>()?;
        let total: Complex64 = parts.iter().sum();
        return Ok(ZeroCount::Count {
            value: (total / Complex64::new(0.0, 2.0 * PI)).re,
            perturbations: attempt,
            panels: all.len(),
        });
    }
    Err(Error::BoundaryZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{theta_numeric, ThetaKind};

    #[test]
    fn theta_has_one_zero_per_unit_cell() {
        let tau = Complex64::new(0.13, 1.1);
        let f = |t: Complex64| theta_numeric(ThetaKind::Theta, t, tau, 1e-14);
        let n = count_zeros(&f, tau, Cell::unit(tau), IDENTICALLY_ZERO_FLOOR).unwrap();
        assert_eq!(n.rounded(), Some(1), "{n:?}");
        let n = count_zeros(&f, tau, Cell::two_z(tau), IDENTICALLY_ZERO_FLOOR).unwrap();
        assert_eq!(n.rounded(), Some(4), "{n:?}");
    }

    #[test]
    fn zero_function() {
        let tau = Complex64::new(0.0, 1.0);
        let f = |_t: Complex64| Ok(Complex64::new(1e-13, 0.0));
        assert!(matches!(
            count_zeros(&f, tau, Cell::unit(tau), IDENTICALLY_ZERO_FLOOR).unwrap(),
            ZeroCount::IdenticallyZero { .. }
        ));
    }

    #[test]
    fn constant_has_no_zeros() {
        let tau = Complex64::new(0.5, 1.2);
        let f = |_t: Complex64| Ok(Complex64::new(3.0, 0.0));
        assert_eq!(count_zeros(&f, tau, Cell::two_z(tau), IDENTICALLY_ZERO_FLOOR).unwrap().rounded(), Some(0));
    }

    #[test]
    fn boundary_zero_is_dodged() {
        let tau = Complex64::new(0.0, 1.0);
        let cell = Cell::unit(tau);
        let z0 = cell.origin + cell.v1 * 0.5 + cell.v2;
        let f = move |t: Complex64| Ok(t - z0);
        let n = count_zeros(&f, tau, cell, IDENTICALLY_ZERO_FLOOR).unwrap();
        assert!(matches!(n, ZeroCount::Count { perturbations: 1.., .. }), "{n:?}");
        assert_eq!(n.rounded(), Some(1));
    }
}
