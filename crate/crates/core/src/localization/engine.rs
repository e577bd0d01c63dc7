use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{ActionData, FixedComponent};
use crate::algebra::{
    fiber_integrate, int, Graded, GradedElement, GradedSpace, QSeries, Rat, Ring, WGraded, WLaurentRational,
};
use crate::error::{Error, Result};
use crate::genera::{theta_quotient_integrand, Normalization, OperatorKind, RootBundle};
use crate::theta::Ledger;

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<Error>,
    pub warnings: Vec<String>,
    /// Anomaly computed at each component, in component order.
    pub component_anomalies: Vec<i64>,
    /// Parity of the number of half-integer normal weights per component.
    pub weight_parity: Vec<i64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    /// The first error, for callers that want a `Result`.
    pub fn into_result(self) -> Result<()> {
        match self.errors.into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn weighted_sum(bundles: &[RootBundle], space: &Arc<GradedSpace>) -> GradedElement {
    bundles.iter().fold(GradedElement::zero(space), |acc, b| {
        b.roots
            .iter()
            .fold(acc, |acc, x| acc.add(&x.scale(&b.weight.to_rat())))
    })
}

fn square_sum<'a>(roots: impl Iterator<Item = &'a GradedElement>, space: &Arc<GradedSpace>) -> GradedElement {
    roots.fold(GradedElement::zero(space), |acc, x| acc.add(&x.mul(x)))
}

/// `sum_v n_v^2 d(n_v) - sum_gamma m_gamma^2 d(m_gamma)` with `V`, or
/// `sum_gamma m_gamma^2 d(m_gamma)` without. Weights may be half-integers,
/// so the value is computed in quarters and must come out integral.
fn component_anomaly_quarters(comp: &FixedComponent, with_v: bool) -> i64 {
    let sq = |b: &RootBundle| b.weight.twice() * b.weight.twice() * b.rank() as i64;
    let normal: i64 = comp.normals.iter().map(sq).sum();
    if with_v {
        comp.vbundles.iter().map(sq).sum::<i64>() - normal
    } else {
        normal
    }
}

/// Structural checks, the `V`/`TX` first-Pontryagin identities, weight
/// parity, and anomaly consistency. Never fails; problems are listed.
pub fn validate(data: &ActionData) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut anomalies = Vec::new();
    let mut parity = Vec::new();
    let with_v = data.has_v();
    if data.components.is_empty() {
        warnings.push("dataset has no fixed components; every character is 0".into());
    }
    for comp in &data.components {
        let name = &comp.name;
        if comp.normals.iter().any(|b| b.weight.is_zero()) {
            errors.push(Error::ZeroWeightNormalBundle(name.clone()));
        }
        if comp.total_half_dim() != data.k {
            errors.push(Error::InvalidData(format!(
                "component `{name}`: k_alpha + sum d(m) = {} but the fiber half-dimension is {}",
                comp.total_half_dim(),
                data.k
            )));
        }
        match data.l {
            Some(l) if comp.v_half_rank() != l => errors.push(Error::InvalidData(format!(
                "component `{name}`: V ranks sum to {} but v_half_rank is {l}",
                comp.v_half_rank()
            ))),
            None if !comp.vbundles.is_empty() => errors.push(Error::InvalidData(format!(
                "component `{name}` lists V summands but the dataset declares no V"
            ))),
            _ => {}
        }
        if comp.orientation != 1 && comp.orientation != -1 {
            errors.push(Error::InvalidData(format!("component `{name}`: sign must be +1 or -1")));
        }
        if comp.table.fiber_half_dim() as usize != comp.fiber_half_dim() {
            errors.push(Error::InvalidData(format!(
                "component `{name}`: integration table has fiber degree {} but there are {} tangent roots",
                2 * comp.table.fiber_half_dim(),
                comp.fiber_half_dim()
            )));
        }
        for g in comp.table.generators() {
            if comp.space.index_of(g).is_none() {
                errors.push(Error::InvalidData(format!("component `{name}`: table generator `{g}` is undeclared")));
            }
        }
        for g in data.base.names() {
            if comp.space.index_of(g).is_none() {
                errors.push(Error::InvalidData(format!("component `{name}`: base generator `{g}` missing")));
            }
        }
        let all_roots = comp
            .tangent
            .roots
            .iter()
            .chain(comp.normals.iter().flat_map(|b| b.roots.iter()))
            .chain(comp.vbundles.iter().flat_map(|b| b.roots.iter()));
        for r in all_roots {
            if !r.is_nilpotent() {
                errors.push(Error::InvalidData(format!("component `{name}`: a Chern root has a degree-0 term")));
                break;
            }
        }
        if with_v {
            let lhs = weighted_sum(&comp.vbundles, &comp.space);
            let rhs = weighted_sum(&comp.normals, &comp.space);
            if lhs != rhs {
                errors.push(Error::InvalidData(format!(
                    "component `{name}`: sum n_v u_v = {lhs} differs from sum m x = {rhs}"
                )));
            }
            let u2 = square_sum(comp.vbundles.iter().flat_map(|b| b.roots.iter()), &comp.space);
            let tx2 = square_sum(
                comp.tangent.roots.iter().chain(comp.normals.iter().flat_map(|b| b.roots.iter())),
                &comp.space,
            );
            if u2 != tx2 {
                warnings.push(format!(
                    "component `{name}`: sum u^2 = {u2} and sum y^2 + sum x^2 = {tx2} differ as polynomials \
                     (they need only agree in cohomology)"
                ));
            }
        }
        let quarters = component_anomaly_quarters(comp, with_v);
        if quarters % 4 != 0 {
            let msg = format!("component `{name}`: anomaly {quarters}/4 is not an integer");
            if with_v {
                errors.push(Error::InvalidData(msg));
            } else {
                warnings.push(msg);
            }
        }
        anomalies.push(quarters.div_euclid(4));
        let half_count: i64 = comp
            .normals
            .iter()
            .filter(|b| !b.weight.is_integer())
            .map(|b| b.rank() as i64)
            .sum();
        parity.push(half_count.rem_euclid(2));
    }
    let mut distinct = anomalies.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() > 1 {
        if with_v {
            errors.push(Error::InconsistentAnomaly(anomalies.clone()));
        } else {
            // Without V the sums only matter for the H operator.
            warnings.push(format!(
                "sum m^2 d(m) differs between components ({anomalies:?}); p_1(TX) is not a multiple of u^2 \
                 and the h operator has no anomaly index"
            ));
        }
    } else if let (Some(&n), Some(d)) = (distinct.first(), data.declared_anomaly) {
        if n != d {
            errors.push(Error::InvalidData(format!("declared anomaly {d} but the weights give {n}")));
        }
    }
    let mut p = parity.clone();
    p.sort();
    p.dedup();
    if p.len() > 1 {
        errors.push(Error::SpinInconsistent(parity.clone()));
    }
    ValidationReport {
        errors,
        warnings,
        component_anomalies: anomalies,
        weight_parity: parity,
    }
}

/// The common anomaly `n`; for data without `V` this is
/// `sum m^2 d(m) = n` with `p_1(TX)_{S^1} = n u^2`.
pub fn anomaly_index(data: &ActionData) -> Result<i64> {
    let with_v = data.has_v();
    let values: Vec<i64> = data
        .components
        .iter()
        .map(|c| component_anomaly_quarters(c, with_v))
        .collect();
    let mut distinct = values.clone();
    distinct.sort();
    distinct.dedup();
    match distinct.as_slice() {
        [] => Ok(0),
        [q] if q % 4 == 0 => Ok(q / 4),
        _ => Err(Error::InconsistentAnomaly(values.iter().map(|q| q.div_euclid(4)).collect())),
    }
}

/// The anomaly under both sign conventions for `p_1(TX)_{S^1}`:
/// `(n, -n)` where `n` is [`anomaly_index`].
pub fn anomaly_both_conventions(data: &ActionData) -> Result<(i64, i64)> {
    anomaly_index(data).map(|n| (n, -n))
}

/// One component's integrated contribution, already multiplied by its
/// orientation sign.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentContribution {
    pub name: String,
    pub series: QSeries<WGraded>,
    pub w_half: i64,
    pub ledger: Ledger,
}

pub fn component_contribution(
    comp: &FixedComponent,
    base: &Arc<GradedSpace>,
    kind: OperatorKind,
    norm: Normalization,
    n8: i64,
) -> Result<ComponentContribution> {
    let integrand = theta_quotient_integrand(kind, norm, comp, n8)?;
    let sign = int(comp.orientation as i64);
    let series = integrand
        .series
        .try_map(|g| fiber_integrate(g, &comp.table, base).map(|x| x.scale(&sign)))?;
    Ok(ComponentContribution {
        name: comp.name.clone(),
        series,
        w_half: integrand.w_half,
        ledger: integrand.ledger,
    })
}

pub fn component_contributions(
    data: &ActionData,
    kind: OperatorKind,
    norm: Normalization,
    n8: i64,
) -> Result<Vec<ComponentContribution>> {
    if kind.uses_v() && !data.has_v() {
        return Err(Error::MissingVBundle(kind.name().into()));
    }
    kind.check_normalization(norm)?;
    let run = |c: &FixedComponent| component_contribution(c, &data.base, kind, norm, n8);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.components.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.components.iter().map(run).collect()
    }
}

/// Equivariant Chern character of the index bundle over the base: a
/// q-series of `w`-rational, base-graded coefficients times
/// `w^{w_half/2}` and the ledger constant.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusResult {
    pub kind: OperatorKind,
    pub normalization: Normalization,
    pub n8: i64,
    pub base: Arc<GradedSpace>,
    pub series: QSeries<WGraded>,
    pub w_half: i64,
    pub ledger: Ledger,
    /// SHA-256 of the dataset the result was computed from.
    pub provenance: String,
}

impl GenusResult {
    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    /// Numeric value per base monomial of the truncated series.
    pub fn eval(&self, t: Complex64, tau: Complex64) -> Vec<(Vec<u16>, Complex64)> {
        let i = Complex64::i();
        let pi = std::f64::consts::PI;
        let w = (i * pi * t).exp();
        let q8 = (2.0 * pi * i * tau / 8.0).exp();
        let extra = (i * pi * t / 2.0).exp().powi(self.w_half as i32) * self.ledger.value();
        base_monomials(&self.base)
            .into_iter()
            .map(|e| {
                let v = self.series.eval_with(q8, |g| g.coeff(&e).eval(w));
                (e, v * extra)
            })
            .collect()
    }
}

/// All base monomials up to the cap, lowest degree first.
pub fn base_monomials(base: &GradedSpace) -> Vec<Vec<u16>> {
    (0..=base.cap())
        .step_by(2)
        .flat_map(|d| base.monomials_of_degree(d))
        .collect()
}

/// SHA-256 of the canonical JSON document; datasets whose roots cannot be
/// written as JSON fall back to hashing the debug rendering.
pub fn dataset_digest(data: &ActionData) -> String {
    crate::dataset::canonical_digest(data).unwrap_or_else(|_| {
        let mut h = Sha256::new();
        h.update(format!("{data:?}").as_bytes());
        hex::encode(h.finalize())
    })
}

fn sum_contributions(parts: &[ComponentContribution], n8: i64) -> Result<(QSeries<WGraded>, i64, Ledger)> {
    let nonzero: Vec<&ComponentContribution> = parts.iter().filter(|p| !p.series.is_zero()).collect();
    let mut halves: Vec<i64> = nonzero.iter().map(|p| p.w_half).collect();
    halves.sort();
    halves.dedup();
    if halves.len() > 1 {
        return Err(Error::SpinInconsistent(parts.iter().map(|p| p.w_half).collect()));
    }
    let mut ledgers: Vec<Ledger> = nonzero.iter().map(|p| p.ledger).collect();
    ledgers.dedup();
    if ledgers.len() > 1 {
        return Err(Error::InvalidData("components produced different constant ledgers".into()));
    }
    let mut acc: QSeries<WGraded> = QSeries::zero(n8);
    for p in parts {
        acc = acc.add(&p.series);
    }
    Ok((
        acc,
        halves.first().copied().unwrap_or(0),
        ledgers.first().copied().unwrap_or(Ledger::ONE),
    ))
}

/// Sum of the pushed-forward integrands over all fixed components.
pub fn equivariant_character(
    data: &ActionData,
    kind: OperatorKind,
    norm: Normalization,
    n8: i64,
) -> Result<GenusResult> {
    let parts = component_contributions(data, kind, norm, n8)?;
    let (series, w_half, ledger) = sum_contributions(&parts, n8)?;
    Ok(GenusResult {
        kind,
        normalization: norm,
        n8,
        base: data.base.clone(),
        series,
        w_half,
        ledger,
        provenance: dataset_digest(data),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidConstant {
    /// Exponent of `q` in eighths.
    pub q8: i64,
    pub monomial: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum RigidityVerdict {
    Rigid { constants: Vec<RigidConstant> },
    NotRigid { q8: i64, monomial: String, coefficient: String },
}

impl RigidityVerdict {
    pub fn is_rigid(&self) -> bool {
        matches!(self, RigidityVerdict::Rigid { .. })
    }

    /// Constants as exact rationals keyed by `(q8, monomial)`.
    pub fn constants(&self) -> Vec<(i64, String, Rat)> {
        match self {
            RigidityVerdict::Rigid { constants } => constants
                .iter()
                .map(|c| (c.q8, c.monomial.clone(), crate::algebra::parse_rat(&c.value).unwrap()))
                .collect(),
            RigidityVerdict::NotRigid { .. } => Vec::new(),
        }
    }
}

/// Rigid iff every stored coefficient is free of `w`.
pub fn rigidity_check(result: &GenusResult) -> RigidityVerdict {
    let mut constants = Vec::new();
    for (e, g) in result.series.terms() {
        for (m, c) in g.terms() {
            let monomial = result.base.format_monomial(m);
            match c.as_constant() {
                Some(v) if result.w_half == 0 => constants.push(RigidConstant {
                    q8: e,
                    monomial,
                    value: crate::algebra::rat_string(&v),
                }),
                _ => {
                    return RigidityVerdict::NotRigid {
                        q8: e,
                        monomial,
                        coefficient: c.to_string(),
                    }
                }
            }
        }
    }
    RigidityVerdict::Rigid { constants }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleLine {
    pub q8: i64,
    /// Largest reduced denominator degree among the single components.
    pub max_component_denominator: usize,
    /// Reduced denominator degree of the sum.
    pub sum_denominator: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleReport {
    pub lines: Vec<PoleLine>,
    /// Every coefficient of the sum is a Laurent polynomial.
    pub cancels_entirely: bool,
    /// Some single component has a genuine pole.
    pub components_have_poles: bool,
}

fn denominator_degree(g: &WGraded) -> usize {
    g.terms().map(|(_, c)| c.denom().span()).max().unwrap_or(0)
}

/// Compare denominators before and after summing the components.
pub fn pole_cancellation_check(parts: &[ComponentContribution]) -> PoleReport {
    let mut exps: Vec<i64> = parts.iter().flat_map(|p| p.series.terms().map(|(e, _)| e)).collect();
    exps.sort();
    exps.dedup();
    let n8 = parts.iter().map(|p| p.series.n8()).min().unwrap_or(0);
    let mut sum: QSeries<WGraded> = QSeries::zero(n8);
    for p in parts {
        sum = sum.add(&p.series);
    }
    let lines: Vec<PoleLine> = exps
        .into_iter()
        .filter(|e| *e <= n8)
        .map(|e| PoleLine {
            q8: e,
            max_component_denominator: parts
                .iter()
                .filter_map(|p| p.series.coeff(e))
                .map(denominator_degree)
                .max()
                .unwrap_or(0),
            sum_denominator: sum.coeff(e).map(denominator_degree).unwrap_or(0),
        })
        .collect();
    PoleReport {
        cancels_entirely: lines.iter().all(|l| l.sum_denominator == 0),
        components_have_poles: lines.iter().any(|l| l.max_component_denominator > 0),
        lines,
    }
}

/// The degree-`2p` part of a result, one q-series per base monomial.
pub fn degree_component(result: &GenusResult, degree: u32) -> Result<Vec<(Vec<u16>, QSeries<WLaurentRational>)>> {
    if degree % 2 != 0 || degree > result.base.cap() {
        return Err(Error::DegreeOutOfRange {
            requested: degree,
            cap: result.base.cap(),
        });
    }
    Ok(result
        .base
        .monomials_of_degree(degree)
        .into_iter()
        .map(|m| {
            let s = result.series.map(|g| g.coeff(&m));
            (m, s)
        })
        .collect())
}

/// A scalar q-series of a result at the given base monomial.
pub fn monomial_series(result: &GenusResult, monomial: &[u16]) -> QSeries<WLaurentRational> {
    result.series.map(|g: &Graded<WLaurentRational>| g.coeff(monomial))
}

/// True if every coefficient is an integer constant.
pub fn constants_are_integers(verdict: &RigidityVerdict) -> bool {
    verdict.constants().iter().all(|(_, _, v)| v.is_integer())
}
