use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::One;
use serde::Serialize;

use crate::algebra::{int, series_mul, HalfInt, QSeries, Rat, Ring, WLaurentPoly, WLaurentRational};
use crate::error::{Error, Result};
use crate::genera::{index_bridge, trivial_factor, Normalization, OperatorKind};
use crate::localization::{equivariant_character, ActionData};
use crate::theta::{c_power, Ledger};

/// Character of `H^0 - H^1` of the degree-`k` line bundle on the rotation
/// two-sphere: `w^k + w^{k-2} + ... + w^{-k}` for `k >= 0`, zero at
/// `k = -1`, and `-character(-k-2)` below.
pub fn borel_weil_character(k: i64) -> WLaurentPoly {
    if k >= 0 {
        WLaurentPoly::from_terms((0..=k).map(|j| (k - 2 * j, Rat::one())))
    } else if k == -1 {
        WLaurentPoly::zero()
    } else {
        borel_weil_character(-k - 2).neg()
    }
}

/// Classes on the two-sphere written as `sum_b s^b p_b(w)` with `s = O(1)`
/// (so `TX = s^2`) and `p_b` the character of a trivial twist.
#[derive(Clone, Debug, PartialEq, Default)]
struct SClass(BTreeMap<i64, WLaurentPoly>);

impl SClass {
    fn monomial(b: i64, p: WLaurentPoly) -> Self {
        let mut m = BTreeMap::new();
        if !p.is_zero() {
            m.insert(b, p);
        }
        SClass(m)
    }

    /// `s^a w^e`.
    fn line(a: i64, e: i64) -> Self {
        Self::monomial(a, WLaurentPoly::w_pow(e))
    }

    fn constant(r: &Rat) -> Self {
        Self::monomial(0, WLaurentPoly::constant(r.clone()))
    }

    /// Index of the Dirac operator twisted by the class.
    fn dirac_index(&self) -> WLaurentPoly {
        self.0
            .iter()
            .fold(WLaurentPoly::zero(), |acc, (b, p)| acc.add(&p.mul(&borel_weil_character(b - 1))))
    }
}

impl Ring for SClass {
    fn zero_like(&self) -> Self {
        SClass::default()
    }
    fn one_like(&self) -> Self {
        SClass::constant(&Rat::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut m = self.0.clone();
        for (b, p) in &rhs.0 {
            let v = m.get(b).map_or_else(|| p.clone(), |q| q.add(p));
            if v.is_zero() {
                m.remove(b);
            } else {
                m.insert(*b, v);
            }
        }
        SClass(m)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = SClass::default();
        for (a, p) in &self.0 {
            for (b, q) in &rhs.0 {
                out = out.add(&SClass::monomial(a + b, p.mul(q)));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        SClass(self.0.iter().map(|(b, p)| (*b, p.neg())).collect())
    }
    fn try_inverse(&self) -> Option<Self> {
        let mut it = self.0.iter();
        match (it.next(), it.next()) {
            (Some((b, p)), None) => Some(SClass::monomial(-b, p.try_inverse()?)),
            _ => None,
        }
    }
    fn scale(&self, r: &Rat) -> Self {
        SClass(
            self.0
                .iter()
                .map(|(b, p)| (*b, p.scale(r)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        )
    }
}

/// An equivariant line bundle `O(2a) (x) C_(j)` on the rotation two-sphere:
/// weight `a + j` at the north pole and `-a + j` at the south pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct S2Line {
    pub tangent_power: i64,
    pub twist: i64,
}

impl S2Line {
    pub const TANGENT: S2Line = S2Line { tangent_power: 1, twist: 0 };

    /// `L^{1/2} = s^a w^j`.
    fn half(self) -> SClass {
        SClass::line(self.tangent_power, self.twist)
    }

    fn character(self) -> SClass {
        SClass::line(2 * self.tangent_power, 2 * self.twist)
    }

    fn conjugate(self) -> SClass {
        SClass::line(-2 * self.tangent_power, -2 * self.twist)
    }
}

fn one(n8: i64) -> QSeries<SClass> {
    QSeries::monomial(0, SClass::constant(&Rat::one()), n8)
}

fn lift(s: &QSeries<Rat>) -> QSeries<SClass> {
    s.map(SClass::constant)
}

fn lambda(chars: &[SClass], sign: i64, half: bool, n8: i64) -> QSeries<SClass> {
    let mut acc = one(n8);
    let mut n = 1;
    loop {
        let e = if half { 8 * n - 4 } else { 8 * n };
        if e > n8 {
            break;
        }
        for c in chars {
            let f = QSeries::from_terms([(0, c.one_like()), (e, c.scale(&int(sign)))], n8);
            acc = series_mul(&acc, &f);
        }
        n += 1;
    }
    acc
}

fn symmetric(chars: &[SClass], n8: i64) -> QSeries<SClass> {
    let mut acc = one(n8);
    let mut n = 1;
    while 8 * n <= n8 {
        for c in chars {
            let terms = (0..=n8 / (8 * n)).map(|j| (8 * n * j, c.pow(j as u32)));
            acc = series_mul(&acc, &QSeries::from_terms(terms, n8));
        }
        n += 1;
    }
    acc
}

/// Index character of the operator on the rotation two-sphere with the
/// given `V`, by expanding the twisting element into line bundles and
/// summing Borel–Weil characters. No fixed-point formula and no theta
/// function is involved.
pub fn s2_oracle_character(
    kind: OperatorKind,
    norm: Normalization,
    v: &[S2Line],
    n8: i64,
) -> Result<QSeries<WLaurentPoly>> {
    if kind.uses_v() && v.is_empty() {
        return Err(Error::MissingVBundle(kind.name().into()));
    }
    if !kind.supports(norm) {
        return Err(Error::UnsupportedNormalization {
            operator: kind.name().into(),
            normalization: norm.name().into(),
        });
    }
    let k = 1;
    let l = v.len() as i64;
    let (q8, c_pow, scale) = index_bridge(kind, norm, k, l);
    let payload_n8 = n8 - q8;
    let tx = [S2Line::TANGENT.character(), S2Line::TANGENT.conjugate()];
    let v_c: Vec<SClass> = v.iter().flat_map(|x| [x.character(), x.conjugate()]).collect();
    let normalized = norm == Normalization::VNormalized || kind == OperatorKind::WittenH;

    let mut element = symmetric(&tx, payload_n8);
    if normalized {
        element = series_mul(&element, &lift(&trivial_factor(-1, false, 2 * k, payload_n8)));
    }
    let lam = match kind {
        OperatorKind::DsThetaPrime => Some((&tx[..], 1, false)),
        OperatorKind::DThetaQ => Some((&tx[..], -1, true)),
        OperatorKind::DThetaMinusQ => Some((&tx[..], 1, true)),
        OperatorKind::DeltaVThetaPrime => Some((&v_c[..], 1, false)),
        OperatorKind::DVThetaQ => Some((&v_c[..], -1, true)),
        OperatorKind::DVThetaMinusQ => Some((&v_c[..], 1, true)),
        OperatorKind::DVStarDifference => Some((&v_c[..], -1, false)),
        OperatorKind::WittenH => None,
    };
    if let Some((chars, sign, half)) = lam {
        element = series_mul(&element, &lambda(chars, sign, half, payload_n8));
        if norm == Normalization::VNormalized && kind != OperatorKind::WittenH {
            element = series_mul(&element, &lift(&trivial_factor(sign, half, -2 * l, payload_n8)));
        }
    }
    let unit = SClass::constant(&Rat::one());
    let twist = match kind {
        OperatorKind::DsThetaPrime => S2Line::TANGENT.half().add(&S2Line::TANGENT.half().try_inverse().unwrap()),
        OperatorKind::DeltaVThetaPrime => v.iter().fold(unit, |acc, x| {
            acc.mul(&x.half().add(&x.half().try_inverse().unwrap()))
        }),
        OperatorKind::DVStarDifference => v.iter().fold(unit, |acc, x| {
            acc.mul(&x.half().try_inverse().unwrap().sub(&x.half()))
        }),
        _ => unit,
    };
    let index = element.map(|c| c.mul(&twist).dirac_index());
    let c = c_power(c_pow, payload_n8).map(|r| WLaurentPoly::constant(r.clone()));
    Ok(series_mul(&index, &c).scale(&scale).shift(q8))
}

/// The rotation two-sphere with the given `V`, as point-base fixed-point
/// data.
pub fn s2_with_v(v: &[S2Line]) -> ActionData {
    use crate::algebra::{GradedElement, GradedSpace, IntegrationTable};
    use crate::genera::RootBundle;
    use crate::localization::FixedComponent;
    let space = GradedSpace::point();
    let zero = GradedElement::zero(&space);
    let pole = |name: &str, sign: i64| FixedComponent {
        name: name.into(),
        space: space.clone(),
        tangent: RootBundle::new(HalfInt::ZERO, vec![]),
        normals: vec![RootBundle::new(HalfInt::from_int(sign), vec![zero.clone()])],
        vbundles: v
            .iter()
            .map(|x| RootBundle::new(HalfInt::from_int(sign * x.tangent_power + x.twist), vec![zero.clone()]))
            .collect(),
        table: IntegrationTable::point(),
        orientation: 1,
    };
    ActionData {
        name: "s2".into(),
        k: 1,
        l: (!v.is_empty()).then_some(v.len()),
        base: space.clone(),
        components: vec![pole("north", 1), pole("south", -1)],
        declared_anomaly: None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct S2OracleReport {
    pub kind: OperatorKind,
    pub normalization: Normalization,
    pub n8: i64,
    /// Frozen `w`-shift between the oracle and the engine.
    pub shift: i64,
    pub equal: bool,
    /// Lowest q-exponent (eighths) where the two sides differ.
    pub first_difference: Option<i64>,
    /// The oracle side is not identically zero through `n8`.
    pub nontrivial: bool,
}

/// `V = C_(-1) (+) TX^2`, the `V` used for the `V` operators in the oracle;
/// it is degree 0 of the `s2-family-base` entry.
pub const ORACLE_V: [S2Line; 2] = [
    S2Line { tangent_power: 0, twist: -1 },
    S2Line { tangent_power: 2, twist: 0 },
];

fn engine_side(kind: OperatorKind, norm: Normalization, v: &[S2Line], n8: i64) -> Result<QSeries<WLaurentRational>> {
    let data = s2_with_v(v);
    let r = equivariant_character(&data, kind, norm, n8)?;
    if r.w_half != 0 || r.ledger != Ledger::ONE {
        return Err(Error::InvalidData(format!(
            "engine result for {kind} carries w^{}/2 and ledger {:?}",
            r.w_half, r.ledger
        )));
    }
    Ok(r.series.map(|g| g.degree0()))
}

/// The `w`-shift of the oracle, pinned once by the lowest nonzero
/// coefficient of the raw `D*` operator with [`ORACLE_V`].
fn calibrated_shift() -> Result<i64> {
    static SHIFT: OnceLock<std::result::Result<i64, Error>> = OnceLock::new();
    SHIFT
        .get_or_init(|| {
            let kind = OperatorKind::DVStarDifference;
            let norm = Normalization::Raw;
            let n8 = 8;
            let oracle = s2_oracle_character(kind, norm, &ORACLE_V, n8)?;
            let engine = engine_side(kind, norm, &ORACLE_V, n8)?;
            let e = oracle
                .val()
                .ok_or_else(|| Error::InvalidData("calibration character vanishes".into()))?;
            let o = WLaurentRational::from_poly(oracle.coeff(e).unwrap().clone());
            let g = engine.coeff(e).cloned().unwrap_or_else(WLaurentRational::zero);
            let ratio = g
                .div(&o)
                .ok_or_else(|| Error::InvalidData("calibration division failed".into()))?;
            match (ratio.denom().as_monomial(), ratio.numer().as_monomial()) {
                (Some((0, d)), Some((s, c))) if c == d => Ok(s),
                _ => Err(Error::InvalidData(format!("calibration ratio {ratio} is not a power of w"))),
            }
        })
        .clone()
}

/// Compare the engine with the Borel–Weil expansion on the two-sphere,
/// exactly, through `q^{n8/8}`. Operators without `V` run on the plain
/// rotation; `V` operators use [`ORACLE_V`].
pub fn oracle_check_s2(kind: OperatorKind, n8: i64) -> Result<S2OracleReport> {
    if n8 > 16 {
        return Err(Error::InvalidData(format!("oracle order {n8} exceeds 16")));
    }
    let shift = calibrated_shift()?;
    let norm = kind.default_normalization();
    let v: &[S2Line] = if kind.uses_v() { &ORACLE_V } else { &[] };
    let oracle = s2_oracle_character(kind, norm, v, n8)?
        .map(|p| WLaurentRational::from_poly(p.shift(shift)));
    let engine = engine_side(kind, norm, v, n8)?;
    let top = oracle.n8().min(engine.n8());
    let diff = oracle.truncate(top).sub(&engine.truncate(top));
    let first_difference = diff.val();
    Ok(S2OracleReport {
        kind,
        normalization: norm,
        n8: top,
        shift,
        equal: first_difference.is_none(),
        first_difference,
        nontrivial: !oracle.truncate(top).is_zero(),
    })
}
