use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::engine::base_monomials;
use super::{ActionData, FixedComponent};
use crate::algebra::{GradedElement, GradedSpace};
use crate::error::{Error, Result};
use crate::genera::{numeric_integrand_value, Normalization, NumericContext, OperatorKind};

/// Pole tolerance in `|t - pole|`.
const POLE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericOptions {
    /// Cauchy-grid points per generator.
    pub points: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { points: 24 }
    }
}

/// Distance from `v` to the lattice `Z + Z tau`.
fn lattice_distance(v: Complex64, tau: Complex64) -> f64 {
    let b0 = (v.im / tau.im).round();
    let mut best = f64::INFINITY;
    for db in -1..=1 {
        let b = b0 + db as f64;
        let w = v - b * tau;
        let a0 = w.re.round();
        for da in -1..=1 {
            best = best.min((w - (a0 + da as f64)).norm());
        }
    }
    best
}

/// `sum |c| prod rho^e` over the terms of a root.
fn magnitude_bound(root: &GradedElement, radii: &[f64]) -> f64 {
    root.terms()
        .map(|(e, c)| {
            c.to_f64().unwrap_or(f64::INFINITY).abs()
                * e.iter().zip(radii).map(|(&k, r)| r.powi(k as i32)).product::<f64>()
        })
        .sum()
}

/// Radii for the Cauchy grid: each denominator theta must stay a quarter
/// of the way from its nearest zero, so aliasing decays like `4^-points`.
fn grid_radii(comp: &FixedComponent, t: Complex64, tau: Complex64) -> Result<Vec<f64>> {
    let n = comp.space.len();
    let shape: Vec<f64> = (0..n).map(|i| 1.0 + 0.17 * i as f64).collect();
    let mut limits: Vec<(&GradedElement, f64)> = Vec::new();
    let shortest = tau.im.min(1.0);
    for y in &comp.tangent.roots {
        limits.push((y, PI * shortest / 2.0));
    }
    for b in &comp.normals {
        let m = b.weight.to_f64();
        let d = lattice_distance(t * m, tau);
        if d / m.abs() < POLE_TOL {
            return Err(Error::NearPole {
                component: comp.name.clone(),
                distance: d / m.abs(),
            });
        }
        for x in &b.roots {
            limits.push((x, PI * d / 2.0));
        }
    }
    let mut s = 0.5;
    for _ in 0..60 {
        let radii: Vec<f64> = shape.iter().map(|g| g * s).collect();
        if limits.iter().all(|(r, lim)| magnitude_bound(r, &radii) <= *lim) {
            return Ok(radii);
        }
        s /= 2.0;
    }
    Err(Error::NearPole {
        component: comp.name.clone(),
        distance: 0.0,
    })
}

/// The component's integrand at explicit generator values.
pub fn numeric_integrand(
    comp: &FixedComponent,
    kind: OperatorKind,
    norm: Normalization,
    t: Complex64,
    tau: Complex64,
    eps: f64,
    values: &[Complex64],
) -> Result<Complex64> {
    let ctx = NumericContext::new(t, tau, eps)?;
    numeric_integrand_value(kind, norm, comp, &ctx, &|r| r.eval(values))
}

/// Exponent vectors (in the component's generators) whose Taylor
/// coefficients feed the fiber integral, with their table weights and
/// the base monomial they land on.
fn needed_terms(comp: &FixedComponent, base: &Arc<GradedSpace>) -> Result<Vec<(Vec<u16>, f64, usize)>> {
    let space = &comp.space;
    let mut table_entries: Vec<(Vec<u16>, f64)> = comp
        .table
        .entries()
        .iter()
        .map(|(e, v)| (e.clone(), v.to_f64().unwrap_or(f64::NAN)))
        .collect();
    if comp.table.fiber_half_dim() == 0 {
        table_entries = vec![(vec![0; comp.table.generators().len()], 1.0)];
    }
    let fiber_idx: Vec<usize> = comp
        .table
        .generators()
        .iter()
        .map(|g| space.index_of(g).ok_or(Error::GeneratorTableMismatch))
        .collect::<Result<_>>()?;
    let base_idx: Vec<usize> = base
        .names()
        .iter()
        .map(|g| space.index_of(g).ok_or(Error::GeneratorTableMismatch))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (bi, eb) in base_monomials(base).into_iter().enumerate() {
        for (ef, val) in &table_entries {
            if *val == 0.0 {
                continue;
            }
            let mut e = vec![0u16; space.len()];
            for (j, &k) in ef.iter().enumerate() {
                e[fiber_idx[j]] += k;
            }
            for (j, &k) in eb.iter().enumerate() {
                e[base_idx[j]] += k;
            }
            if space.degree_of(&e) <= space.cap() {
                out.push((e, *val, bi));
            }
        }
    }
    Ok(out)
}

/// Fiber integral of one component's numeric integrand, per base monomial,
/// times the orientation sign.
fn component_numeric(
    comp: &FixedComponent,
    base: &Arc<GradedSpace>,
    kind: OperatorKind,
    norm: Normalization,
    ctx: &NumericContext,
    opts: NumericOptions,
) -> Result<Vec<Complex64>> {
    let n = comp.space.len();
    let n_base = base_monomials(base).len();
    let terms = needed_terms(comp, base)?;
    let mut out = vec![Complex64::new(0.0, 0.0); n_base];
    if terms.is_empty() {
        return Ok(out);
    }
    let radii = grid_radii(comp, ctx.t, ctx.tau)?;
    let m = opts.points.max(2);
    let total = m.checked_pow(n as u32).ok_or_else(|| Error::InvalidData("numeric grid too large".into()))?;
    let roots: Vec<Vec<Complex64>> = radii
        .iter()
        .map(|r| (0..m).map(|j| Complex64::from_polar(*r, 2.0 * PI * j as f64 / m as f64)).collect())
        .collect();
    let sample = |flat: usize| -> Result<Vec<Complex64>> {
        let mut z = Vec::with_capacity(n);
        let mut rest = flat;
        for r in &roots {
            z.push(r[rest % m]);
            rest /= m;
        }
        let f = numeric_integrand_value(kind, norm, comp, ctx, &|root| root.eval(&z))?;
        Ok(terms
            .iter()
            .map(|(e, _, _)| f * e.iter().zip(&z).map(|(&k, zi)| zi.powi(-(k as i32))).product::<Complex64>())
            .collect())
    };
    let add = |mut a: Vec<Complex64>, b: Vec<Complex64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    let zero = vec![Complex64::new(0.0, 0.0); terms.len()];
    #[cfg(feature = "parallel")]
    let sums = {
        use rayon::prelude::*;
        (0..total)
            .into_par_iter()
            .map(sample)
            .try_reduce(|| zero.clone(), |a, b| Ok(add(a, b)))?
    };
    #[cfg(not(feature = "parallel"))]
    let sums = (0..total).map(sample).try_fold(zero, |a, b| b.map(|b| add(a, b)))?;
    let sign = comp.orientation as f64;
    for ((_, val, bi), s) in terms.iter().zip(sums) {
        out[*bi] += s * (*val * sign / total as f64);
    }
    Ok(out)
}

/// Direct evaluation of the localized sum with numeric theta functions at
/// `w = e^{pi i t}`, `q = e^{2 pi i tau}`: one value per base monomial, in
/// the order of the base monomials by degree.
pub fn evaluate_numeric(
    data: &ActionData,
    kind: OperatorKind,
    norm: Normalization,
    t: Complex64,
    tau: Complex64,
    eps: f64,
) -> Result<Vec<(Vec<u16>, Complex64)>> {
    evaluate_numeric_with(data, kind, norm, t, tau, eps, NumericOptions::default())
}

pub fn evaluate_numeric_with(
    data: &ActionData,
    kind: OperatorKind,
    norm: Normalization,
    t: Complex64,
    tau: Complex64,
    eps: f64,
    opts: NumericOptions,
) -> Result<Vec<(Vec<u16>, Complex64)>> {
    if !(tau.im > 0.0) {
        return Err(Error::NonconvergentDomain(tau.im));
    }
    if kind.uses_v() && !data.has_v() {
        return Err(Error::MissingVBundle(kind.name().into()));
    }
    kind.check_normalization(norm)?;
    let ctx = NumericContext::new(t, tau, eps)?;
    let monomials = base_monomials(&data.base);
    let mut acc = vec![Complex64::new(0.0, 0.0); monomials.len()];
    for comp in &data.components {
        let part = component_numeric(comp, &data.base, kind, norm, &ctx, opts)?;
        acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
    }
    Ok(monomials.into_iter().zip(acc).collect())
}
