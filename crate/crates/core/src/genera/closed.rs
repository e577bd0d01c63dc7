use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use super::{Normalization, OperatorKind};
use crate::algebra::{
    series_invert, series_mul, GradedElement, GradedSpace, HalfInt, QSeries, Rat, Ring, WGraded, WLaurentRational,
};
use crate::error::{Error, Result};
use crate::localization::FixedComponent;
use crate::theta::{c_power, theta_taylor_payload, Ledger, Prefactor, ThetaKind, ThetaTaylorStack};

/// A bracketed integrand over a component's generators, with every
/// prefactor folded in: `series` has actual `q^{n/8}` exponents, the
/// leftover `w^{w_half/2}` has `w_half` in {0, 1}, and `ledger` is
/// canonical (only `2 pi` and a single `i` remain).
#[derive(Clone, Debug, PartialEq)]
pub struct Integrand {
    pub series: QSeries<WGraded>,
    pub w_half: i64,
    pub ledger: Ledger,
}

impl Integrand {
    /// `scale * prefactor * payload`.
    pub(crate) fn assemble(
        payload: QSeries<WGraded>,
        prefactor: Prefactor,
        scale: Rat,
        space: &Arc<GradedSpace>,
    ) -> Self {
        let (r, ledger) = prefactor.ledger.canonical();
        let scale = scale * r;
        let c = c_power(prefactor.c_pow, payload.n8()).map(|r| WGraded::constant(space, WLaurentRational::constant(r.clone())));
        let fold = prefactor.w_half.div_euclid(2);
        let series = series_mul(&payload, &c)
            .map(|g| g.map_coeffs(|c| c.shift(fold)).scale(&scale))
            .shift(prefactor.q8);
        Self {
            series,
            w_half: prefactor.w_half.rem_euclid(2),
            ledger,
        }
    }

    pub fn n8(&self) -> i64 {
        self.series.n8()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct StackKey {
    kind: ThetaKind,
    m: HalfInt,
    /// `theta(x) / x` at `m = 0`.
    quotient: bool,
}

impl StackKey {
    fn theta(kind: ThetaKind, m: HalfInt) -> Self {
        Self { kind, m, quotient: false }
    }

    fn tilde() -> Self {
        Self {
            kind: ThetaKind::Theta,
            m: HalfInt::ZERO,
            quotient: true,
        }
    }
}

enum Scalar {
    /// `theta'(0, tau)`
    ThetaPrime,
    /// `theta_a(0, tau)`
    Nullwert(ThetaKind),
}

struct Plan {
    ledger: Ledger,
    num: Vec<(StackKey, GradedElement)>,
    den: Vec<(StackKey, GradedElement)>,
    scalars: Vec<(Scalar, i64)>,
}

impl Plan {
    fn q8(&self) -> i64 {
        let q = |k: &StackKey| k.kind.base_prefactor().q8;
        let s = |s: &Scalar| match s {
            Scalar::ThetaPrime => 1,
            Scalar::Nullwert(k) => k.base_prefactor().q8,
        };
        self.num.iter().map(|(k, _)| q(k)).sum::<i64>() - self.den.iter().map(|(k, _)| q(k)).sum::<i64>()
            + self.scalars.iter().map(|(x, p)| s(x) * p).sum::<i64>()
    }
}

fn build_stack(key: StackKey, k_max: usize, payload_n8: i64) -> ThetaTaylorStack {
    if key.quotient {
        theta_taylor_payload(ThetaKind::Theta, HalfInt::ZERO, k_max + 1, payload_n8)
            .order_one_quotient()
            .expect("theta at 0 has a simple zero")
    } else {
        theta_taylor_payload(key.kind, key.m, k_max, payload_n8)
    }
}

fn plan(kind: OperatorKind, norm: Normalization, comp: &FixedComponent) -> Result<Plan> {
    kind.check_normalization(norm)?;
    if comp.normals.iter().any(|b| b.weight.is_zero()) {
        return Err(Error::ZeroWeightNormalBundle(comp.name.clone()));
    }
    let k = comp.total_half_dim() as i64;
    let l = comp.v_half_rank() as i64;
    let mut p = Plan {
        ledger: Ledger::ONE,
        num: Vec::new(),
        den: Vec::new(),
        scalars: Vec::new(),
    };
    let normal_roots = || {
        comp.normals
            .iter()
            .flat_map(|b| b.roots.iter().map(move |x| (b.weight, x.clone())))
    };
    for y in &comp.tangent.roots {
        p.den.push((StackKey::tilde(), y.clone()));
    }
    for (m, x) in normal_roots() {
        p.den.push((StackKey::theta(ThetaKind::Theta, m), x));
    }
    match kind {
        OperatorKind::DsThetaPrime | OperatorKind::DThetaQ | OperatorKind::DThetaMinusQ => {
            // (2 pi y theta_a / theta)(TX^g) prod (i^{-1} theta_a / theta)(N)
            let a = kind.numerator_theta().unwrap();
            p.ledger = Ledger::i(-k);
            for y in &comp.tangent.roots {
                p.num.push((StackKey::theta(a, HalfInt::ZERO), y.clone()));
            }
            for (m, x) in normal_roots() {
                p.num.push((StackKey::theta(a, m), x));
            }
        }
        OperatorKind::DeltaVThetaPrime
        | OperatorKind::DVThetaQ
        | OperatorKind::DVThetaMinusQ
        | OperatorKind::DVStarDifference => {
            let a = kind.numerator_theta().unwrap();
            let star = kind == OperatorKind::DVStarDifference;
            p.ledger = Ledger::i(if star { l - k } else { -k });
            for b in &comp.vbundles {
                for u in &b.roots {
                    p.num.push((StackKey::theta(a, b.weight), u.clone()));
                }
            }
            if norm == Normalization::VNormalized {
                if star {
                    p.ledger = p.ledger.mul(Ledger::two_pi(l - k));
                    p.scalars.push((Scalar::ThetaPrime, k - l));
                } else {
                    p.ledger = p.ledger.mul(Ledger::two_pi(-k));
                    p.scalars.push((Scalar::ThetaPrime, k));
                    p.scalars.push((Scalar::Nullwert(a), -l));
                }
            }
        }
        OperatorKind::WittenH => {
            p.ledger = Ledger::two_pi(-k).mul(Ledger::i(-k));
            p.scalars.push((Scalar::ThetaPrime, k));
        }
    }
    Ok(p)
}

fn scalar_series(s: &Scalar, payload_n8: i64) -> (QSeries<WLaurentRational>, Prefactor) {
    match s {
        Scalar::ThetaPrime => {
            let st = theta_taylor_payload(ThetaKind::Theta, HalfInt::ZERO, 1, payload_n8);
            // theta'(0) = 2 pi i * D theta(0)
            let pref = st.prefactor.mul(Prefactor::with_ledger(Ledger::two_pi(1).mul(Ledger::i(1))));
            (st.entries[1].clone(), pref)
        }
        Scalar::Nullwert(kind) => {
            let st = theta_taylor_payload(*kind, HalfInt::ZERO, 0, payload_n8);
            (st.entries[0].clone(), st.prefactor)
        }
    }
}

fn lift_scalar(s: &QSeries<WLaurentRational>, space: &Arc<GradedSpace>) -> QSeries<WGraded> {
    s.map(|c| WGraded::constant(space, c.clone()))
}

fn one_series(space: &Arc<GradedSpace>, n8: i64) -> QSeries<WGraded> {
    QSeries::monomial(0, WGraded::one(space), n8)
}

/// The bracketed integrand of the operator on one fixed component, built
/// from theta functions at the shifted roots `x + m t`.
pub fn theta_quotient_integrand(
    kind: OperatorKind,
    norm: Normalization,
    comp: &FixedComponent,
    n8: i64,
) -> Result<Integrand> {
    let plan = plan(kind, norm, comp)?;
    let space = &comp.space;
    let payload_n8 = n8 - plan.q8();
    let k_max = space.cap() as usize / 2;

    let mut stacks: HashMap<StackKey, ThetaTaylorStack> = HashMap::new();
    let mut prefactor = Prefactor::with_ledger(plan.ledger);
    let mut substituted = |key: StackKey, root: &GradedElement, pref: &mut Prefactor, sign: i64| {
        let st = stacks
            .entry(key)
            .or_insert_with(|| build_stack(key, k_max, payload_n8));
        *pref = pref.mul(st.prefactor.pow(sign));
        st.substitute(root)
    };

    let mut num = one_series(space, payload_n8);
    for (key, root) in &plan.num {
        num = series_mul(&num, &substituted(*key, root, &mut prefactor, 1)?);
    }
    let mut den = one_series(space, payload_n8);
    for (key, root) in &plan.den {
        den = series_mul(&den, &substituted(*key, root, &mut prefactor, -1)?);
    }
    let mut payload = series_mul(&num, &series_invert(&den)?);
    for (s, power) in &plan.scalars {
        let (series, pref) = scalar_series(s, payload_n8);
        let lifted = lift_scalar(&series, space);
        let base = if *power < 0 { series_invert(&lifted)? } else { lifted };
        for _ in 0..power.unsigned_abs() {
            payload = series_mul(&payload, &base);
        }
        prefactor = prefactor.mul(pref.pow(*power));
    }
    Ok(Integrand::assemble(payload, prefactor, Rat::one(), space))
}

/// Complex constants shared by every sample of a numeric integrand.
#[derive(Clone, Copy, Debug)]
pub(crate) struct NumericContext {
    pub t: num_complex::Complex64,
    pub tau: num_complex::Complex64,
    pub eps: f64,
    pub theta_prime: num_complex::Complex64,
}

impl NumericContext {
    pub(crate) fn new(t: num_complex::Complex64, tau: num_complex::Complex64, eps: f64) -> Result<Self> {
        Ok(Self {
            t,
            tau,
            eps,
            theta_prime: crate::theta::theta_prime_zero(tau, eps)?,
        })
    }
}

/// The same quotient as [`theta_quotient_integrand`], evaluated with numeric
/// theta functions; `root_value` gives each Chern root's complex value.
pub(crate) fn numeric_integrand_value(
    kind: OperatorKind,
    norm: Normalization,
    comp: &FixedComponent,
    ctx: &NumericContext,
    root_value: &dyn Fn(&GradedElement) -> num_complex::Complex64,
) -> Result<num_complex::Complex64> {
    use num_complex::Complex64;
    let plan = plan(kind, norm, comp)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let eval = |key: &StackKey, root: &GradedElement| -> Result<Complex64> {
        let x = root_value(root);
        if key.quotient {
            if x.norm() < 1e-12 {
                return Ok(ctx.theta_prime / two_pi_i);
            }
            let th = crate::theta::theta_numeric(ThetaKind::Theta, x / two_pi_i, ctx.tau, ctx.eps)?;
            Ok(th / x)
        } else {
            let v = x / two_pi_i + ctx.t * key.m.to_f64();
            crate::theta::theta_numeric(key.kind, v, ctx.tau, ctx.eps)
        }
    };
    let mut acc = plan.ledger.value();
    for (key, root) in &plan.num {
        acc *= eval(key, root)?;
    }
    for (key, root) in &plan.den {
        acc /= eval(key, root)?;
    }
    for (s, power) in &plan.scalars {
        let v = match s {
            Scalar::ThetaPrime => ctx.theta_prime,
            Scalar::Nullwert(a) => crate::theta::theta_numeric(*a, Complex64::new(0.0, 0.0), ctx.tau, ctx.eps)?,
        };
        acc *= v.powi(*power as i32);
    }
    Ok(acc)
}
