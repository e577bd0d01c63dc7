mod common;

use genus_core::algebra::{int, GradedSpace, HalfInt};
use genus_core::catalog;
use genus_core::genera::{Normalization, OperatorKind};
use genus_core::localization::{
    component_contributions, degree_component, equivariant_character, evaluate_numeric, monomial_series,
    pole_cancellation_check, rigidity_check, validate, ActionData, RigidityVerdict,
};
use genus_core::Error;
use num_complex::Complex64;

fn entry(name: &str) -> ActionData {
    catalog::builtin(name).unwrap().data
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn s2_witten_h_vanishes_with_nonzero_pieces() {
    let data = entry("s2-rotation");
    let r = equivariant_character(&data, OperatorKind::WittenH, Normalization::Raw, 48).unwrap();
    assert!(r.is_zero());
    let parts = component_contributions(&data, OperatorKind::WittenH, Normalization::Raw, 48).unwrap();
    assert!(parts.iter().all(|p| !p.series.is_zero()));
    let poles = pole_cancellation_check(&parts);
    assert!(poles.components_have_poles && poles.cancels_entirely);
    let single = pole_cancellation_check(&parts[..1]);
    assert!(!single.cancels_entirely);
}

#[test]
fn s2_witten_h_numeric_zero() {
    let data = entry("s2-rotation");
    let v = evaluate_numeric(&data, OperatorKind::WittenH, Normalization::Raw, c(0.3, 0.0), c(0.0, 1.0), 1e-12)
        .unwrap();
    assert!(v[0].1.norm() < 1e-9, "{:?}", v);
}

#[test]
fn signatures() {
    let r = equivariant_character(&entry("cp3-weighted"), OperatorKind::DsThetaPrime, Normalization::Raw, 32).unwrap();
    let v = rigidity_check(&r);
    assert!(v.is_rigid());
    assert!(v.constants().iter().all(|(e, _, c)| *e != 0 || *c == int(0)));

    // CP^2 is not spin, so only the q^0 term (the signature) is rigid.
    let r = equivariant_character(&common::cp2_with_curve(), OperatorKind::DsThetaPrime, Normalization::Raw, 16)
        .unwrap();
    let q0 = r.series.coeff(0).unwrap().coeff(&[]);
    assert_eq!(q0.as_constant(), Some(int(1)));
}

#[test]
fn corrupted_cp3_is_not_rigid() {
    let mut data = entry("cp3-weighted");
    data.components[0].normals[0].weight = HalfInt::from_int(-1);
    let r = equivariant_character(&data, OperatorKind::DsThetaPrime, Normalization::Raw, 16).unwrap();
    assert!(matches!(rigidity_check(&r), RigidityVerdict::NotRigid { .. }));
}

#[test]
fn zero_weight_rejected() {
    let mut data = entry("s2-rotation");
    data.components[0].normals[0].weight = HalfInt::ZERO;
    let report = validate(&data);
    assert!(report.errors.iter().any(|e| matches!(e, Error::ZeroWeightNormalBundle(_))));
    assert!(matches!(
        equivariant_character(&data, OperatorKind::DThetaQ, Normalization::Raw, 8),
        Err(Error::ZeroWeightNormalBundle(_))
    ));
}

#[test]
fn v_kind_without_v() {
    assert!(matches!(
        equivariant_character(&entry("s2-rotation"), OperatorKind::DVThetaQ, Normalization::VNormalized, 8),
        Err(Error::MissingVBundle(_))
    ));
}

#[test]
fn weight_negation_inverts_w() {
    for data in [entry("s2-v-double-tangent"), entry("s2-family-base")] {
        for kind in OperatorKind::ALL.into_iter().filter(|k| k.uses_v()) {
            let norm = kind.default_normalization();
            let a = equivariant_character(&data, kind, norm, 16).unwrap();
            let b = equivariant_character(&data.negate_weights(), kind, norm, 16).unwrap();
            let flipped = a.series.map(|g| g.map_coeffs(|c| c.invert_w()));
            assert_eq!(flipped, b.series, "{} {kind}", data.name);
        }
    }
}

#[test]
fn disjoint_union_is_additive() {
    let a = entry("s2xs2-birotation");
    let b = entry("s4-rotation");
    let u = a.disjoint_union(&b).unwrap();
    for kind in [OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::WittenH] {
        let ra = equivariant_character(&a, kind, Normalization::Raw, 16).unwrap();
        let rb = equivariant_character(&b, kind, Normalization::Raw, 16).unwrap();
        let ru = equivariant_character(&u, kind, Normalization::Raw, 16).unwrap();
        assert_eq!(ra.series.add(&rb.series), ru.series);
    }
}

#[test]
fn degree_components() {
    let data = entry("s2-family-base");
    let r = equivariant_character(&data, OperatorKind::DVStarDifference, Normalization::Raw, 16).unwrap();
    let d0 = degree_component(&r, 0).unwrap();
    assert_eq!(d0.len(), 1);
    assert!(!d0[0].1.is_zero());
    assert!(matches!(degree_component(&r, 6), Err(Error::DegreeOutOfRange { .. })));
    // degree 0 of the family is the point-base computation
    let point = catalog::s2_with_v(&catalog::ORACLE_V);
    let p = equivariant_character(&point, OperatorKind::DVStarDifference, Normalization::Raw, 16).unwrap();
    assert_eq!(monomial_series(&p, &[]), d0[0].1);
}

#[test]
fn family_has_degree_two_part() {
    let data = entry("s2-family-base");
    let r = equivariant_character(&data, OperatorKind::DVStarDifference, Normalization::VNormalized, 16).unwrap();
    let d2 = degree_component(&r, 2).unwrap();
    assert_eq!(d2.len(), 1);
    assert!(!d2[0].1.is_zero());
    assert_eq!(r.base, GradedSpace::new(vec![("b".into(), 2)], 4).unwrap());
}

fn formal_vs_numeric(data: &ActionData, kind: OperatorKind, t: Complex64, tau: Complex64) {
    let norm = kind.default_normalization();
    let r = equivariant_character(data, kind, norm, 48).unwrap();
    let formal = r.eval(t, tau);
    let numeric = evaluate_numeric(data, kind, norm, t, tau, 1e-13).unwrap();
    for ((m, a), (_, b)) in formal.iter().zip(&numeric) {
        let scale = a.norm().max(b.norm()).max(1.0);
        assert!((a - b).norm() < 1e-7 * scale, "{} {kind} {m:?}: {a} vs {b}", data.name);
    }
}

#[test]
fn formal_matches_numeric() {
    let t = c(0.23, 0.04);
    let tau = c(0.1, 1.3);
    for name in ["s2-v-double-tangent", "s2-family-base"] {
        for kind in OperatorKind::ALL.into_iter().filter(|k| k.uses_v()) {
            formal_vs_numeric(&entry(name), kind, t, tau);
        }
    }
    for kind in [OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ, OperatorKind::WittenH] {
        formal_vs_numeric(&entry("cp3-weighted"), kind, t, tau);
        formal_vs_numeric(&common::cp2_with_curve(), kind, t, tau);
    }
}

#[test]
fn rigid_values_independent_of_t() {
    let data = entry("s2xs2-birotation");
    let tau = c(0.0, 1.0);
    let eps = 1e-12;
    for kind in [OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ] {
        let a = evaluate_numeric(&data, kind, Normalization::Raw, c(0.21, 0.0), tau, eps).unwrap()[0].1;
        let b = evaluate_numeric(&data, kind, Normalization::Raw, c(0.37, 0.0), tau, eps).unwrap()[0].1;
        assert!((a - b).norm() < 1e-9 * a.norm().max(1.0), "{kind}: {a} vs {b}");
    }
}

#[test]
fn near_pole_is_reported() {
    let data = entry("cp3-weighted");
    let e = evaluate_numeric(&data, OperatorKind::DThetaQ, Normalization::Raw, c(0.5, 0.0), c(0.0, 1.0), 1e-12);
    assert!(matches!(e, Err(Error::NearPole { .. })));
}
