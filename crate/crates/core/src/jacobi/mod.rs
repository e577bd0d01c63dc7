//! Modular-group machinery and numeric Jacobi-form checks.

mod zeros;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::HalfInt;
use crate::error::{Error, Result};
use crate::genera::{Normalization, OperatorKind};
use crate::localization::{
    anomaly_index, base_monomials, degree_component, equivariant_character, evaluate_numeric, rigidity_check, ActionData, GenusResult, RigidityVerdict,
};
use crate::theta::relative_discrepancy;

pub use zeros::{count_zeros, Cell, ZeroCount, IDENTICALLY_ZERO_FLOOR};

/// A numeric function of `(t, tau)`.
pub type NumericFn<'a> = dyn Fn(Complex64, Complex64) -> Result<Complex64> + Sync + 'a;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ModularMatrix {
    pub const IDENTITY: ModularMatrix = ModularMatrix { a: 1, b: 0, c: 0, d: 1 };
    pub const S: ModularMatrix = ModularMatrix { a: 0, b: -1, c: 1, d: 0 };
    pub const T: ModularMatrix = ModularMatrix { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidData(format!("[[{a},{b}],[{c},{d}]] has determinant != 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn mul(&self, o: &ModularMatrix) -> ModularMatrix {
        ModularMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> ModularMatrix {
        ModularMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, n: i64) -> ModularMatrix {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Self::IDENTITY, |acc, _| acc.mul(&base))
    }

    /// `c tau + d`.
    pub fn automorphy(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }

    pub fn act(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / self.automorphy(tau)
    }
}

impl fmt::Display for ModularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    /// `c` even.
    Gamma0_2,
    /// `b` even.
    GammaUpper0_2,
    /// Identity or antidiagonal mod 2.
    GammaTheta,
    SL2Z,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Gamma0_2, Group::GammaUpper0_2, Group::GammaTheta, Group::SL2Z];

    pub fn name(self) -> &'static str {
        match self {
            Group::Gamma0_2 => "gamma0-2",
            Group::GammaUpper0_2 => "gamma-upper0-2",
            Group::GammaTheta => "gamma-theta",
            Group::SL2Z => "sl2z",
        }
    }

    /// A generating set (up to `-1`).
    pub fn generators(self) -> Vec<ModularMatrix> {
        let t = ModularMatrix::T;
        let s = ModularMatrix::S;
        match self {
            Group::Gamma0_2 => vec![t, ModularMatrix { a: 1, b: 0, c: 2, d: 1 }],
            Group::GammaUpper0_2 => vec![t.pow(2), ModularMatrix { a: 1, b: 0, c: 1, d: 1 }],
            Group::GammaTheta => vec![s, t.pow(2)],
            Group::SL2Z => vec![s, t],
        }
    }

    /// The group under which each operator family's components transform.
    pub fn designated(kind: OperatorKind) -> Group {
        use OperatorKind::*;
        match kind {
            DsThetaPrime | DeltaVThetaPrime => Group::Gamma0_2,
            DThetaQ | DVThetaQ => Group::GammaUpper0_2,
            DThetaMinusQ | DVThetaMinusQ => Group::GammaTheta,
            DVStarDifference | WittenH => Group::SL2Z,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown group `{s}`")))
    }
}

pub fn subgroup_member(g: &ModularMatrix, group: Group) -> bool {
    let even = |x: i64| x.rem_euclid(2) == 0;
    match group {
        Group::Gamma0_2 => even(g.c),
        Group::GammaUpper0_2 => even(g.b),
        Group::GammaTheta => {
            let identity = !even(g.a) && even(g.b) && even(g.c) && !even(g.d);
            let anti = even(g.a) && !even(g.b) && !even(g.c) && even(g.d);
            identity || anti
        }
        Group::SL2Z => true,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lattice {
    TwoZ,
    Z,
}

impl Lattice {
    pub fn vectors(self) -> Vec<(i64, i64)> {
        match self {
            Lattice::TwoZ => vec![(2, 0), (0, 2)],
            Lattice::Z => vec![(1, 0), (0, 1)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JacobiFormSpec {
    pub index: HalfInt,
    pub weight: i64,
    pub lattice: Lattice,
    pub group: Group,
}

impl JacobiFormSpec {
    /// Index `n/2`, weight `k + p` (`k - l + p` for the `D*` family) on
    /// `(2Z)^2`, for the degree-`2p` component.
    pub fn designated(kind: OperatorKind, n: i64, k: usize, l: Option<usize>, p: u32) -> Self {
        let weight = match kind {
            OperatorKind::DVStarDifference => k as i64 - l.unwrap_or(0) as i64 + p as i64,
            _ => k as i64 + p as i64,
        };
        Self {
            index: HalfInt::from_twice(n),
            weight,
            lattice: Lattice::TwoZ,
            group: Group::designated(kind),
        }
    }
}

/// `(F|g)(t, tau) = (c tau + d)^-l e^{-2 pi i m c t^2/(c tau + d)} F(t/(c tau + d), g tau)`.
pub fn slash_action<'a>(
    f: &'a NumericFn<'a>,
    g: ModularMatrix,
    spec: JacobiFormSpec,
) -> impl Fn(Complex64, Complex64) -> Result<Complex64> + Sync + 'a {
    move |t, tau| {
        let j = g.automorphy(tau);
        let m = spec.index.to_f64();
        let phase = (Complex64::new(0.0, -2.0 * PI * m * g.c as f64) * t * t / j).exp();
        Ok(j.powi(-(spec.weight as i32)) * phase * f(t / j, g.act(tau))?)
    }
}

/// `e^{-2 pi i m (lambda^2 tau + 2 lambda t)}`.
pub fn lattice_factor(m: HalfInt, lambda: i64, t: Complex64, tau: Complex64) -> Complex64 {
    let l = lambda as f64;
    (Complex64::new(0.0, -2.0 * PI * m.to_f64()) * (tau * (l * l) + t * (2.0 * l))).exp()
}

#[derive(Clone, Copy, Debug)]
pub struct JacobiSample {
    pub t: Complex64,
    pub tau: Complex64,
}

/// Points with `|Re t| <= 1/2`, small `Im t`, `|Re tau| <= 1/2` and
/// `Im tau` in `[0.8, 1.5]`.
pub fn jacobi_samples(n: usize, seed: u64) -> Vec<JacobiSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| JacobiSample {
            t: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.1..0.1)),
            tau: Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.5)),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiReport {
    pub spec: JacobiFormSpec,
    pub generators: Vec<ModularMatrix>,
    pub lattice_vectors: Vec<(i64, i64)>,
    pub samples: usize,
    pub modular_max: f64,
    pub lattice_max: f64,
    pub max_discrepancy: f64,
    pub eps: f64,
    pub pass: bool,
}

impl fmt::Display for JacobiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} index={} weight={} group={} samples={} modular={:.3e} lattice={:.3e} eps={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.spec.index,
            self.spec.weight,
            self.spec.group,
            self.samples,
            self.modular_max,
            self.lattice_max,
            self.eps
        )
    }
}

fn worst(acc: f64, d: f64) -> f64 {
    if d.is_nan() {
        f64::INFINITY
    } else {
        acc.max(d)
    }
}

/// Both defining identities at every sample: `F|g = F` for each
/// generator and the lattice law for each `(lambda, mu)`.
pub fn check_jacobi(
    f: &NumericFn<'_>,
    spec: JacobiFormSpec,
    generators: &[ModularMatrix],
    lattice_vectors: &[(i64, i64)],
    samples: &[JacobiSample],
    eps: f64,
) -> Result<JacobiReport> {
    if let Some(g) = generators.iter().find(|g| !subgroup_member(g, spec.group)) {
        return Err(Error::InvalidData(format!("{g} is not in {}", spec.group)));
    }
    let per_sample = |s: &JacobiSample| -> Result<(f64, f64)> {
        let base = f(s.t, s.tau)?;
        let mut modular = 0.0f64;
        for g in generators {
            let slashed = slash_action(f, *g, spec)(s.t, s.tau)?;
            modular = worst(modular, relative_discrepancy(slashed, base));
        }
        let mut lattice = 0.0f64;
        for &(lambda, mu) in lattice_vectors {
            let shifted = f(s.t + s.tau * lambda as f64 + mu as f64, s.tau)?;
            let expected = lattice_factor(spec.index, lambda, s.t, s.tau) * base;
            lattice = worst(lattice, relative_discrepancy(shifted, expected));
        }
        Ok((modular, lattice))
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        samples.par_iter().map(per_sample).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(f64, f64)> = samples.iter().map(per_sample).collect::<Result<_>>()?;
    let modular_max = parts.iter().fold(0.0, |a, p| worst(a, p.0));
    let lattice_max = parts.iter().fold(0.0, |a, p| worst(a, p.1));
    let max_discrepancy = modular_max.max(lattice_max);
    Ok(JacobiReport {
        spec,
        generators: generators.to_vec(),
        lattice_vectors: lattice_vectors.to_vec(),
        samples: samples.len(),
        modular_max,
        lattice_max,
        max_discrepancy,
        eps,
        pass: max_discrepancy < eps,
    })
}

/// Numeric evaluation target of the localization engine: one base
/// monomial of the equivariant character.
pub struct ComponentFunction<'a> {
    data: &'a ActionData,
    kind: OperatorKind,
    norm: Normalization,
    slot: usize,
    eps: f64,
}

impl<'a> ComponentFunction<'a> {
    pub fn new(
        data: &'a ActionData,
        kind: OperatorKind,
        norm: Normalization,
        monomial: &[u16],
        eps: f64,
    ) -> Result<Self> {
        let slot = base_monomials(&data.base)
            .iter()
            .position(|m| m.as_slice() == monomial)
            .ok_or_else(|| Error::InvalidData(format!("{monomial:?} is not a base monomial")))?;
        Ok(Self { data, kind, norm, slot, eps })
    }

    pub fn eval(&self, t: Complex64, tau: Complex64) -> Result<Complex64> {
        let v = evaluate_numeric(self.data, self.kind, self.norm, t, tau, self.eps)?;
        let value = v[self.slot].1;
        if !value.is_finite() {
            return Err(Error::NonFiniteSample(format!("{t}")));
        }
        Ok(value)
    }
}

/// The degree-`2p` base monomials of a dataset.
pub fn degree_monomials(data: &ActionData, degree: u32) -> Result<Vec<Vec<u16>>> {
    if degree % 2 == 1 || degree > data.base.cap() {
        return Err(Error::DegreeOutOfRange { requested: degree, cap: data.base.cap() });
    }
    Ok(data.base.monomials_of_degree(degree))
}

/// q-order (in eighths) of the formal pass that screens for components
/// which vanish identically.
pub const FORMAL_SCREEN_N8: i64 = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentJacobiReport {
    pub monomial: Vec<u16>,
    /// The formal series of this component is exactly zero through
    /// `FORMAL_SCREEN_N8`; the law is then checked on the zero function,
    /// whose numeric evaluation is pure cancellation noise.
    pub formal_zero: bool,
    pub report: JacobiReport,
}

/// Run `check_jacobi` on every degree-`2p` component in the kind's default
/// normalization, with the spec derived from the anomaly.
pub fn check_degree(
    data: &ActionData,
    kind: OperatorKind,
    degree: u32,
    samples: usize,
    eps: f64,
) -> Result<Vec<ComponentJacobiReport>> {
    let n = anomaly_index(data)?;
    let spec = JacobiFormSpec::designated(kind, n, data.k, data.l, degree / 2);
    check_degree_with(data, kind, degree, spec, samples, eps)
}

/// `check_degree` against an explicit spec.
pub fn check_degree_with(
    data: &ActionData,
    kind: OperatorKind,
    degree: u32,
    spec: JacobiFormSpec,
    samples: usize,
    eps: f64,
) -> Result<Vec<ComponentJacobiReport>> {
    let norm = kind.default_normalization();
    let formal = equivariant_character(data, kind, norm, FORMAL_SCREEN_N8)?;
    let parts = degree_component(&formal, degree)?;
    let pts = jacobi_samples(samples, 0x6a61_636f_6269);
    let generators = spec.group.generators();
    let vectors = spec.lattice.vectors();
    parts
        .into_iter()
        .map(|(m, series)| {
            let formal_zero = series.is_zero();
            let func = ComponentFunction::new(data, kind, norm, &m, 1e-14)?;
            let f = |t, tau| {
                if formal_zero {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    func.eval(t, tau)
                }
            };
            let report = check_jacobi(&f, spec, &generators, &vectors, &pts, eps)?;
            Ok(ComponentJacobiReport { monomial: m, formal_zero, report })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IndexClass {
    RigidByZeroIndex,
    VanishesByNegativeIndex,
    PositiveIndexJacobiForm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexVerdict {
    pub class: IndexClass,
    pub n: i64,
    /// The formal series is exactly zero.
    pub exactly_zero: bool,
    /// `n < 0` but the series does not vanish: the data break the spin
    /// hypotheses.
    pub contradiction: bool,
    /// Present for `n = 0`.
    pub rigidity: Option<RigidityVerdict>,
}

pub fn rigidity_verdict_from_index(n: i64, result: &GenusResult) -> IndexVerdict {
    let exactly_zero = result.is_zero();
    let (class, rigidity, contradiction) = match n.signum() {
        0 => (IndexClass::RigidByZeroIndex, Some(rigidity_check(result)), false),
        -1 => (IndexClass::VanishesByNegativeIndex, None, !exactly_zero),
        _ => (IndexClass::PositiveIndexJacobiForm, None, false),
    };
    IndexVerdict { class, n, exactly_zero, contradiction, rigidity }
}
