use genus_core::algebra::HalfInt;
use genus_core::catalog;
use genus_core::genera::{Normalization, OperatorKind};
use genus_core::jacobi::*;
use genus_core::localization::{anomaly_index, equivariant_character, ActionData};
use genus_core::theta::{theta_numeric, ThetaKind};
use num_complex::Complex64;

fn entry(name: &str) -> ActionData {
    catalog::builtin(name).unwrap().data
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn double_tangent_degree_zero() {
    let data = entry("s2-v-double-tangent");
    assert_eq!(anomaly_index(&data).unwrap(), 1);
    for kind in OperatorKind::ALL.into_iter().filter(|k| k.uses_v()) {
        let reports = check_degree(&data, kind, 0, 32, 1e-8).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert!(r.report.pass, "{kind}: {}", r.report);
        assert_eq!(r.report.spec.index, HalfInt::from_twice(1));
        // V = TX + TX: every family vanishes identically
        assert!(r.formal_zero, "{kind}");
    }
}

#[test]
fn wrong_index_or_weight_fails() {
    let data = entry("s2-family-base");
    let kind = OperatorKind::DVStarDifference;
    let good = JacobiFormSpec::designated(kind, 4, data.k, data.l, 0);
    let r = check_degree_with(&data, kind, 0, good, 8, 1e-8).unwrap();
    assert!(r[0].report.pass && !r[0].formal_zero, "{}", r[0].report);
    for bad in [
        JacobiFormSpec { weight: good.weight + 1, ..good },
        JacobiFormSpec { index: HalfInt::from_int(1), ..good },
    ] {
        let r = check_degree_with(&data, kind, 0, bad, 8, 1e-8).unwrap();
        assert!(!r[0].report.pass, "{}", r[0].report);
    }
}

#[test]
fn family_degree_two_weight_shift() {
    let data = entry("s2-family-base");
    let n = anomaly_index(&data).unwrap();
    let kind = OperatorKind::DVStarDifference;
    let r = check_degree(&data, kind, 2, 16, 1e-8).unwrap();
    assert!(!r[0].formal_zero);
    assert!(r[0].report.pass, "{}", r[0].report);
    assert_eq!(r[0].report.spec.weight, data.k as i64 - 2 + 1);
    // the degree-0 weight does not work in degree 2
    let unshifted = JacobiFormSpec::designated(kind, n, data.k, data.l, 0);
    let r = check_degree_with(&data, kind, 2, unshifted, 8, 1e-8).unwrap();
    assert!(!r[0].report.pass);
    for kind in [OperatorKind::DeltaVThetaPrime, OperatorKind::DVThetaQ, OperatorKind::DVThetaMinusQ] {
        let r = check_degree(&data, kind, 2, 16, 1e-8).unwrap();
        assert_eq!(r[0].report.spec.weight, data.k as i64 + 1);
        assert!(r[0].report.pass);
    }
}

#[test]
fn degree_beyond_cap() {
    let data = entry("s2-family-base");
    assert!(matches!(
        check_degree(&data, OperatorKind::DVStarDifference, 6, 4, 1e-8),
        Err(genus_core::Error::DegreeOutOfRange { .. })
    ));
}

#[test]
fn rigid_entries_transform_with_their_tau_dependence() {
    for e in catalog::all() {
        if e.data.has_v() {
            continue;
        }
        for kind in [OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ] {
            let spec = JacobiFormSpec::designated(kind, 0, e.data.k, None, 0);
            let r = check_degree_with(&e.data, kind, 0, spec, 32, 1e-8).unwrap();
            assert!(r[0].report.pass, "{} {kind}: {}", e.name, r[0].report);
        }
        let data = e.data.with_tangent_v();
        for kind in OperatorKind::ALL.into_iter().filter(|k| k.uses_v()) {
            let r = check_degree(&data, kind, 0, 32, 1e-8).unwrap();
            assert_eq!(r[0].report.spec.index, HalfInt::ZERO);
            assert!(r[0].report.pass, "{} {kind}: {}", e.name, r[0].report);
            assert_eq!(r[0].formal_zero, kind != OperatorKind::DVStarDifference);
        }
    }
}

#[test]
fn witten_h_on_s2_passes_trivially() {
    let data = entry("s2-rotation");
    let r = check_degree(&data, OperatorKind::WittenH, 0, 8, 1e-8).unwrap();
    assert!(r[0].formal_zero && r[0].report.pass);
}

#[test]
fn identity_slash_is_trivial() {
    let f = |t: Complex64, tau: Complex64| theta_numeric(ThetaKind::Theta1, t, tau, 1e-14);
    let spec = JacobiFormSpec { index: HalfInt::from_twice(1), weight: 3, lattice: Lattice::TwoZ, group: Group::SL2Z };
    let g = slash_action(&f, ModularMatrix::IDENTITY, spec);
    for s in jacobi_samples(5, 3) {
        assert_eq!(g(s.t, s.tau).unwrap(), f(s.t, s.tau).unwrap());
    }
}

#[test]
fn theta_lattice_law() {
    // theta(t + 2 tau) = e^{-2 pi i (1/2)(4 tau + 4 t)} theta(t) up to sign
    let f = |t: Complex64, tau: Complex64| theta_numeric(ThetaKind::Theta, t, tau, 1e-14);
    for s in jacobi_samples(10, 9) {
        let lhs = f(s.t + s.tau * 2.0, s.tau).unwrap();
        let rhs = lattice_factor(HalfInt::from_twice(1), 2, s.t, s.tau) * f(s.t, s.tau).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0));
    }
}

#[test]
fn zero_counts() {
    let tau = c(0.5, 1.2);
    let kind = OperatorKind::DVStarDifference;
    let data = entry("s2-v-double-tangent");
    let func = ComponentFunction::new(&data, kind, kind.default_normalization(), &[], 1e-14).unwrap();
    let f = |t| func.eval(t, tau);
    let n = count_zeros(&f, tau, Cell::two_z(tau), IDENTICALLY_ZERO_FLOOR).unwrap();
    assert!(matches!(n, ZeroCount::IdenticallyZero { .. }), "{n:?}");

    // index 2: 2m = 4 zeros per unit cell, 16 on the (2Z)^2 cell
    let data = entry("s2-family-base");
    let func = ComponentFunction::new(&data, kind, kind.default_normalization(), &[0], 1e-14).unwrap();
    let f = |t| func.eval(t, tau);
    let n = count_zeros(&f, tau, Cell::two_z(tau), IDENTICALLY_ZERO_FLOOR).unwrap();
    assert_eq!(n.rounded(), Some(16), "{n:?}");
    let n = count_zeros(&f, tau, Cell::unit(tau), IDENTICALLY_ZERO_FLOOR).unwrap();
    assert_eq!(n.rounded(), Some(4), "{n:?}");

    let s2 = entry("s2-rotation");
    let func = ComponentFunction::new(&s2, OperatorKind::WittenH, Normalization::Raw, &[], 1e-14).unwrap();
    let f = |t| func.eval(t, tau);
    let n = count_zeros(&f, tau, Cell::two_z(tau), IDENTICALLY_ZERO_FLOOR).unwrap();
    assert!(matches!(n, ZeroCount::IdenticallyZero { .. }), "{n:?}");

    // the Euler characteristic, a nonzero constant
    let cp3 = entry("cp3-weighted").with_tangent_v();
    let func = ComponentFunction::new(&cp3, kind, kind.default_normalization(), &[], 1e-14).unwrap();
    assert!((func.eval(c(0.3, 0.1), tau).unwrap() - 4.0).norm() < 1e-9);
    let f = |t| func.eval(t, tau);
    assert_eq!(count_zeros(&f, tau, Cell::two_z(tau), IDENTICALLY_ZERO_FLOOR).unwrap().rounded(), Some(0));
}

#[test]
fn index_classification() {
    let cp3 = entry("cp3-weighted").with_tangent_v();
    let n = anomaly_index(&cp3).unwrap();
    let r = equivariant_character(&cp3, OperatorKind::DVThetaQ, Normalization::VNormalized, 16).unwrap();
    let v = rigidity_verdict_from_index(n, &r);
    assert_eq!(v.class, IndexClass::RigidByZeroIndex);
    assert!(v.rigidity.unwrap().is_rigid());

    let s2 = entry("s2-rotation");
    let n = anomaly_index(&s2).unwrap();
    let r = equivariant_character(&s2, OperatorKind::WittenH, Normalization::Raw, 48).unwrap();
    let v = rigidity_verdict_from_index(n, &r);
    assert_eq!(v.class, IndexClass::PositiveIndexJacobiForm);
    assert!(v.exactly_zero);

    let family = entry("s2-family-base");
    let r = equivariant_character(&family, OperatorKind::DVStarDifference, Normalization::VNormalized, 8).unwrap();
    let v = rigidity_verdict_from_index(-1, &r);
    assert_eq!(v.class, IndexClass::VanishesByNegativeIndex);
    assert!(v.contradiction && !v.exactly_zero);
}
