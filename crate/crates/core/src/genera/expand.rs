use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use super::classes::{a_hat, conjugate_characters, line_characters};
use super::closed::{theta_quotient_integrand, Integrand};
use super::{Normalization, OperatorKind, RootBundle};
use crate::algebra::{
    int, rat, series_invert, series_mul, GradedSpace, QSeries, Rat, Ring, WGraded, WLaurentRational,
};
use crate::error::Result;
use crate::localization::FixedComponent;
use crate::theta::{Ledger, Prefactor};

fn one(space: &Arc<GradedSpace>, n8: i64) -> QSeries<WGraded> {
    QSeries::monomial(0, WGraded::one(space), n8)
}

/// `ch Lambda_{s q^e}` summed over the grid `e = 8n` (or `8n - 4` when
/// `half`), n >= 1: `prod_n prod_l (1 + s q^e l)` over the given line
/// characters.
pub fn lambda_ch(chars: &[WGraded], sign: i64, half: bool, space: &Arc<GradedSpace>, n8: i64) -> QSeries<WGraded> {
    let mut acc = one(space, n8);
    let mut n = 1;
    loop {
        let e = if half { 8 * n - 4 } else { 8 * n };
        if e > n8 {
            break;
        }
        for l in chars {
            let f = QSeries::from_terms([(0, WGraded::one(space)), (e, l.scale(&int(sign)))], n8);
            acc = series_mul(&acc, &f);
        }
        n += 1;
    }
    acc
}

/// `ch (x)_{n>=1} S_{q^n}`: `prod_n prod_l 1 / (1 - q^n l)`.
pub fn symmetric_ch(chars: &[WGraded], space: &Arc<GradedSpace>, n8: i64) -> QSeries<WGraded> {
    let mut acc = one(space, n8);
    let mut n = 1;
    while 8 * n <= n8 {
        for l in chars {
            let mut terms = vec![(0, WGraded::one(space))];
            let mut p = WGraded::one(space);
            let mut j = 1;
            while 8 * n * j <= n8 {
                p = p.mul(l);
                terms.push((8 * n * j, p.clone()));
                j += 1;
            }
            acc = series_mul(&acc, &QSeries::from_terms(terms, n8));
        }
        n += 1;
    }
    acc
}

/// `prod_{n>=1} (1 + s q^e)^{power}` with rational coefficients.
pub(crate) fn trivial_factor(sign: i64, half: bool, power: i64, n8: i64) -> QSeries<Rat> {
    let mut acc = QSeries::monomial(0, Rat::one(), n8);
    let mut n = 1;
    loop {
        let e = if half { 8 * n - 4 } else { 8 * n };
        if e > n8 {
            break;
        }
        acc = series_mul(&acc, &QSeries::from_terms([(0, Rat::one()), (e, int(sign))], n8));
        n += 1;
    }
    let base = if power < 0 { series_invert(&acc).expect("constant term 1") } else { acc };
    base.pow(power.unsigned_abs() as u32, Rat::one())
}

fn lift(s: &QSeries<Rat>, space: &Arc<GradedSpace>) -> QSeries<WGraded> {
    s.map(|r| WGraded::constant(space, WLaurentRational::constant(r.clone())))
}

fn complexified(bundles: &[&RootBundle]) -> Result<Vec<WGraded>> {
    let mut out = Vec::new();
    for b in bundles {
        out.extend(line_characters(b)?);
        out.extend(conjugate_characters(b)?);
    }
    Ok(out)
}

/// Equivariant Chern character of the `Theta` element of the operator
/// (without the spinor twist), from the generating functions of
/// `Lambda_t` and `S_t` applied to `TX (x) C` and `V (x) C`.
pub fn witten_element_ch(
    kind: OperatorKind,
    norm: Normalization,
    tangent: &RootBundle,
    normals: &[RootBundle],
    vbundles: &[RootBundle],
    space: &Arc<GradedSpace>,
    n8: i64,
) -> Result<QSeries<WGraded>> {
    kind.check_normalization(norm)?;
    let mut tx: Vec<&RootBundle> = vec![tangent];
    tx.extend(normals.iter());
    let tx_c = complexified(&tx)?;
    let v_c = complexified(&vbundles.iter().collect::<Vec<_>>())?;
    let two_k = tx_c.len() as i64;
    let two_l = v_c.len() as i64;
    // H always uses S(TX - dim X)
    let normalized = norm == Normalization::VNormalized || kind == OperatorKind::WittenH;

    let mut out = symmetric_ch(&tx_c, space, n8);
    if normalized {
        out = series_mul(&out, &lift(&trivial_factor(-1, false, two_k, n8), space));
    }
    let lambda = match kind {
        OperatorKind::DsThetaPrime => Some((&tx_c, 1, false)),
        OperatorKind::DThetaQ => Some((&tx_c, -1, true)),
        OperatorKind::DThetaMinusQ => Some((&tx_c, 1, true)),
        OperatorKind::DeltaVThetaPrime => Some((&v_c, 1, false)),
        OperatorKind::DVThetaQ => Some((&v_c, -1, true)),
        OperatorKind::DVThetaMinusQ => Some((&v_c, 1, true)),
        OperatorKind::DVStarDifference => Some((&v_c, -1, false)),
        OperatorKind::WittenH => None,
    };
    if let Some((chars, sign, half)) = lambda {
        out = series_mul(&out, &lambda_ch(chars, sign, half, space, n8));
        if normalized {
            out = series_mul(&out, &lift(&trivial_factor(sign, half, -two_l, n8), space));
        }
    }
    Ok(out)
}

enum Spinor {
    Sum,
    Difference,
}

/// `prod (L^{1/2} +- L^{-1/2})` over the given roots, returned as a graded
/// coefficient together with its `w^{1/2}` offset.
fn spinor_character(bundles: &[&RootBundle], which: Spinor, space: &Arc<GradedSpace>) -> Result<(WGraded, i64)> {
    let mut acc = WGraded::one(space);
    let mut w_half = 0;
    for b in bundles {
        let wm = WLaurentRational::w_pow(b.weight.twice());
        for x in &b.roots {
            // L^{-1/2} (L +- 1) with L^{-1/2} = w^{-m} e^{-x/2}
            let l = x.exp()?.lift::<WLaurentRational>().mul_coeff(&wm);
            let inner = match which {
                Spinor::Sum => l.add(&WGraded::one(space)),
                Spinor::Difference => WGraded::one(space).sub(&l),
            };
            let half = x.scale(&rat(-1, 2)).exp()?.lift::<WLaurentRational>();
            acc = acc.mul(&inner).mul(&half);
            w_half -= b.weight.twice();
        }
    }
    Ok((acc, w_half))
}

/// Fixed-point factor of the Dirac operator: `A-hat(TX^g)` times
/// `prod 1 / (L^{1/2} - L^{-1/2})` over the normal roots.
fn dirac_factor(comp: &FixedComponent) -> Result<(WGraded, i64)> {
    let space = &comp.space;
    let mut acc = a_hat(&comp.tangent, space).lift::<WLaurentRational>();
    let mut w_half = 0;
    for b in &comp.normals {
        let wm = WLaurentRational::w_pow(b.weight.twice());
        for x in &b.roots {
            // L^{1/2} / (L - 1)
            let l = x.exp()?.lift::<WLaurentRational>().mul_coeff(&wm);
            let den = l.sub(&WGraded::one(space));
            let inv = den.try_inverse().ok_or(crate::error::Error::ZeroWeightNormalBundle(comp.name.clone()))?;
            let half = x.scale(&rat(1, 2)).exp()?.lift::<WLaurentRational>();
            acc = acc.mul(&inv).mul(&half);
            w_half += b.weight.twice();
        }
    }
    Ok((acc, w_half))
}

/// `(q8, c_pow, scale)` with `F = scale * q^{q8/8} c(q)^{c_pow} ch(Ind)`,
/// relating the operator's index character to its theta quotient.
pub(crate) fn index_bridge(kind: OperatorKind, norm: Normalization, k: i64, l: i64) -> (i64, i64, Rat) {
    let normalized = norm == Normalization::VNormalized && kind != OperatorKind::WittenH;
    let sign_l = if l % 2 == 0 { int(1) } else { int(-1) };
    match (kind, normalized) {
        (OperatorKind::DsThetaPrime, _) | (OperatorKind::WittenH, _) => (0, 0, int(1)),
        (OperatorKind::DThetaQ | OperatorKind::DThetaMinusQ, _) => (-k, 0, int(1)),
        (OperatorKind::DeltaVThetaPrime, false) => (l - k, l - k, int(1)),
        (OperatorKind::DVThetaQ | OperatorKind::DVThetaMinusQ, false) => (-k, l - k, int(1)),
        (OperatorKind::DVStarDifference, false) => (l - k, l - k, sign_l),
        (OperatorKind::DeltaVThetaPrime, true) => (0, 0, rat(1, 1i64 << l)),
        (OperatorKind::DVThetaQ | OperatorKind::DVThetaMinusQ, true) => (0, 0, int(1)),
        (OperatorKind::DVStarDifference, true) => (0, 0, sign_l),
    }
}

/// The same integrand as [`theta_quotient_integrand`], computed as
/// `A-hat * (normal factor) * ch(twist) * ch(Theta element)` times the
/// index-bridge prefactor.
pub fn expansion_integrand(
    kind: OperatorKind,
    norm: Normalization,
    comp: &FixedComponent,
    n8: i64,
) -> Result<Integrand> {
    kind.check_normalization(norm)?;
    if comp.normals.iter().any(|b| b.weight.is_zero()) {
        return Err(crate::error::Error::ZeroWeightNormalBundle(comp.name.clone()));
    }
    let space = &comp.space;
    let k = comp.total_half_dim() as i64;
    let l = comp.v_half_rank() as i64;
    let (q8, c_pow, scale) = index_bridge(kind, norm, k, l);
    let payload_n8 = n8 - q8;

    let (dirac, dirac_half) = dirac_factor(comp)?;
    let (twist, twist_half) = match kind {
        OperatorKind::DsThetaPrime => {
            let mut all: Vec<&RootBundle> = vec![&comp.tangent];
            all.extend(comp.normals.iter());
            spinor_character(&all, Spinor::Sum, space)?
        }
        OperatorKind::DeltaVThetaPrime => {
            spinor_character(&comp.vbundles.iter().collect::<Vec<_>>(), Spinor::Sum, space)?
        }
        OperatorKind::DVStarDifference => {
            spinor_character(&comp.vbundles.iter().collect::<Vec<_>>(), Spinor::Difference, space)?
        }
        _ => (WGraded::one(space), 0),
    };
    let theta_element = witten_element_ch(kind, norm, &comp.tangent, &comp.normals, &comp.vbundles, space, payload_n8)?;
    let local = dirac.mul(&twist);
    let payload = theta_element.map(|c| c.mul(&local));
    let prefactor = Prefactor {
        q8,
        c_pow,
        w_half: dirac_half + twist_half,
        ledger: Ledger::ONE,
    };
    Ok(Integrand::assemble(payload, prefactor, scale, space))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub kind: OperatorKind,
    pub normalization: Normalization,
    pub component: String,
    pub n8: i64,
    pub equal: bool,
    /// Lowest q-exponent (in eighths) where the two routes differ.
    pub first_difference: Option<i64>,
    pub w_half_match: bool,
    pub ledger_match: bool,
}

/// Compare the theta-quotient integrand with the `Lambda`/`S` expansion,
/// exactly, through `q^{n8/8}`.
pub fn oracle_expand_vs_closed(
    kind: OperatorKind,
    norm: Normalization,
    comp: &FixedComponent,
    n8: i64,
) -> Result<OracleReport> {
    let closed = theta_quotient_integrand(kind, norm, comp, n8)?;
    let expanded = expansion_integrand(kind, norm, comp, n8)?;
    let top = closed.n8().min(expanded.n8());
    let a = closed.series.truncate(top);
    let b = expanded.series.truncate(top);
    let diff = a.sub(&b);
    let first_difference = diff.val();
    let w_half_match = closed.w_half == expanded.w_half;
    let ledger_match = closed.ledger == expanded.ledger;
    Ok(OracleReport {
        kind,
        normalization: norm,
        component: comp.name.clone(),
        n8: top,
        equal: first_difference.is_none() && w_half_match && ledger_match,
        first_difference,
        w_half_match,
        ledger_match,
    })
}
