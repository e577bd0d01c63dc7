//! Built-in fixed-point datasets and the Borel–Weil oracle on the
//! two-sphere.

mod oracle;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{GradedElement, GradedSpace, HalfInt, IntegrationTable};
use crate::error::{Error, Result};
use crate::genera::{OperatorKind, RootBundle};
use crate::localization::{ActionData, FixedComponent};

pub use oracle::{
    borel_weil_character, oracle_check_s2, s2_oracle_character, s2_with_v, S2Line, S2OracleReport, ORACLE_V,
};

/// What the engine is expected to produce for one operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Expectation {
    /// Every coefficient is `w`-free.
    Rigid,
    /// Every coefficient is exactly zero.
    Vanishes,
    /// The degree components are Jacobi forms of index `n/2`.
    JacobiForm,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Rigid => "rigid",
            Expectation::Vanishes => "vanishes",
            Expectation::JacobiForm => "jacobi-form",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub data: ActionData,
    pub doc: &'static str,
    pub expected: Vec<(OperatorKind, Expectation)>,
    pub provenance: &'static str,
}

pub const NAMES: [&str; 7] = [
    "s2-rotation",
    "s4-rotation",
    "s4-rotation-half",
    "cp3-weighted",
    "s2xs2-birotation",
    "s2-family-base",
    "s2-v-double-tangent",
];

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// An isolated fixed point whose roots are all zero.
fn point(name: &str, weights: &[HalfInt], v: &[HalfInt]) -> FixedComponent {
    let space = GradedSpace::point();
    let zero = GradedElement::zero(&space);
    let line = |m: &HalfInt| RootBundle::new(*m, vec![zero.clone()]);
    FixedComponent {
        name: name.into(),
        space: space.clone(),
        tangent: RootBundle::new(HalfInt::ZERO, vec![]),
        normals: weights.iter().map(line).collect(),
        vbundles: v.iter().map(line).collect(),
        table: IntegrationTable::point(),
        orientation: 1,
    }
}

fn points(name: &str, k: usize, l: Option<usize>, sets: &[(&str, Vec<i64>, Vec<i64>)]) -> ActionData {
    let components = sets
        .iter()
        .map(|(n, w, v)| {
            let w: Vec<HalfInt> = w.iter().map(|t| h(*t)).collect();
            let v: Vec<HalfInt> = v.iter().map(|t| h(*t)).collect();
            point(n, &w, &v)
        })
        .collect();
    ActionData {
        name: name.into(),
        k,
        l,
        base: GradedSpace::point(),
        components,
        declared_anomaly: None,
    }
}

fn with_anomaly(mut d: ActionData, n: i64) -> ActionData {
    d.declared_anomaly = Some(n);
    d
}

/// The rotation two-sphere over a base with one degree-2 class `b`; the
/// normal lines at the poles have roots `b` and `-b`. `V = C_(-1) (+) TX^2`
/// with roots `3b/5` and `+-4b/5`: the (3, 4, 5) triple makes both
/// first-Pontryagin identities hold with `V` roots that are not multiples
/// of the normal roots, so the degree-2 parts do not vanish. Anomaly
/// `1 + 4 - 1 = 4`.
fn s2_family_base() -> ActionData {
    use crate::algebra::{rat, Ring};
    let base = GradedSpace::new(vec![("b".into(), 2)], 4).expect("valid space");
    let b = GradedElement::generator(&base, 0);
    let line = |m: i64, x: GradedElement| RootBundle::new(HalfInt::from_int(m), vec![x]);
    let comp = |name: &str, normal: RootBundle, v: Vec<RootBundle>| FixedComponent {
        name: name.into(),
        space: base.clone(),
        tangent: RootBundle::new(HalfInt::ZERO, vec![]),
        normals: vec![normal],
        vbundles: v,
        table: IntegrationTable::point(),
        orientation: 1,
    };
    let north = comp(
        "north",
        line(1, b.clone()),
        vec![line(-1, b.scale(&rat(3, 5))), line(2, b.scale(&rat(4, 5)))],
    );
    let south = comp(
        "south",
        line(-1, b.neg()),
        vec![line(-1, b.scale(&rat(3, 5))), line(-2, b.scale(&rat(-4, 5)))],
    );
    ActionData {
        name: "s2-family-base".into(),
        k: 1,
        l: Some(2),
        base: base.clone(),
        components: vec![north, south],
        declared_anomaly: Some(4),
    }
}

pub fn builtin(name: &str) -> Result<CatalogEntry> {
    use Expectation::*;
    use OperatorKind::*;
    let non_v_rigid = vec![(DsThetaPrime, Rigid), (DThetaQ, Rigid), (DThetaMinusQ, Rigid)];
    let entry = match name {
        "s2-rotation" => CatalogEntry {
            name: "s2-rotation",
            data: with_anomaly(
                points("s2-rotation", 1, None, &[("north", vec![2], vec![]), ("south", vec![-2], vec![])]),
                1,
            ),
            doc: "Rotation of the two-sphere about its axis: two isolated fixed points with weights +1 and -1.",
            expected: vec![(DsThetaPrime, Vanishes), (DThetaQ, Vanishes), (DThetaMinusQ, Vanishes), (WittenH, Vanishes)],
            provenance: "standard rotation fixed-point data",
        },
        "s4-rotation" => CatalogEntry {
            name: "s4-rotation",
            data: points(
                "s4-rotation",
                2,
                None,
                &[("north", vec![2, 4], vec![]), ("south", vec![-2, 4], vec![])],
            ),
            doc: "Rotation of the four-sphere by weights (1, 2) on R^4 (+) R; the south pole carries the \
                  opposite orientation, so one weight changes sign. Integer-weight variant.",
            expected: non_v_rigid.clone(),
            provenance: "standard rotation fixed-point data",
        },
        "s4-rotation-half" => CatalogEntry {
            name: "s4-rotation-half",
            data: points(
                "s4-rotation-half",
                2,
                None,
                &[("north", vec![1, 3], vec![]), ("south", vec![-1, 3], vec![])],
            ),
            doc: "The four-sphere rotation by weights (1/2, 3/2), acting through the double cover of the circle.",
            expected: non_v_rigid.clone(),
            provenance: "half-integer lift of s4-rotation",
        },
        "cp3-weighted" => CatalogEntry {
            name: "cp3-weighted",
            data: points(
                "cp3-weighted",
                3,
                None,
                &[
                    ("p0", vec![2, 4, 6], vec![]),
                    ("p1", vec![-2, 2, 4], vec![]),
                    ("p2", vec![-4, -2, 2], vec![]),
                    ("p3", vec![-6, -4, -2], vec![]),
                ],
            ),
            doc: "CP^3 with the circle acting by projective weights (0, 1, 2, 3): four isolated fixed points, \
                  tangent weights the differences.",
            expected: non_v_rigid.clone(),
            provenance: "differences of the projective weights (0, 1, 2, 3)",
        },
        "s2xs2-birotation" => CatalogEntry {
            name: "s2xs2-birotation",
            data: points(
                "s2xs2-birotation",
                2,
                None,
                &[
                    ("nn", vec![2, 4], vec![]),
                    ("ns", vec![2, -4], vec![]),
                    ("sn", vec![-2, 4], vec![]),
                    ("ss", vec![-2, -4], vec![]),
                ],
            ),
            doc: "S^2 x S^2 with the factors rotated at speeds 1 and 2: four isolated fixed points.",
            expected: non_v_rigid.clone(),
            provenance: "product of two rotations",
        },
        "s2-family-base" => CatalogEntry {
            name: "s2-family-base",
            data: s2_family_base(),
            doc: "The rotation two-sphere fibered over a base with one degree-2 class b (cap 4); normal roots \
                  shifted x -> x + b, and V = C_(-1) (+) TX^2 with roots 3b/5, +-4b/5.",
            expected: vec![
                (DeltaVThetaPrime, JacobiForm),
                (DVThetaQ, JacobiForm),
                (DVThetaMinusQ, JacobiForm),
                (DVStarDifference, JacobiForm),
            ],
            provenance: "constructed family example; anomaly 1 + 4 - 1 = 4",
        },
        "s2-v-double-tangent" => CatalogEntry {
            name: "s2-v-double-tangent",
            data: with_anomaly(
                points(
                    "s2-v-double-tangent",
                    1,
                    Some(2),
                    &[("north", vec![2], vec![2, 2]), ("south", vec![-2], vec![-2, -2])],
                ),
                1,
            ),
            doc: "The rotation two-sphere with V = TX (+) TX; anomaly 2 - 1 = 1.",
            expected: vec![
                (DeltaVThetaPrime, JacobiForm),
                (DVThetaQ, JacobiForm),
                (DVThetaMinusQ, JacobiForm),
                (DVStarDifference, JacobiForm),
            ],
            provenance: "constructed from s2-rotation",
        },
        _ => return Err(Error::UnknownEntry(name.into())),
    };
    Ok(entry)
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| builtin(n).expect("listed entry")).collect()
}

impl ActionData {
    /// The same action with `V = TX` (so `l = k` and the anomaly is 0).
    pub fn with_tangent_v(&self) -> ActionData {
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut vb: Vec<RootBundle> = Vec::new();
                if c.tangent.rank() > 0 {
                    vb.push(c.tangent.clone());
                }
                vb.extend(c.normals.iter().cloned());
                FixedComponent { vbundles: vb, ..c.clone() }
            })
            .collect();
        ActionData {
            name: format!("{}+v=tx", self.name),
            l: Some(self.k),
            components,
            declared_anomaly: Some(0),
            ..self.clone()
        }
    }
}

/// The point base, for callers that build small datasets by hand.
pub fn point_base() -> Arc<GradedSpace> {
    GradedSpace::point()
}
