use std::collections::BTreeMap;

use genus_core::algebra::{int, GradedElement, GradedSpace, HalfInt, IntegrationTable, Ring};
use genus_core::catalog::borel_weil_character;
use genus_core::genera::{a_hat, oracle_expand_vs_closed, theta_quotient_integrand, OperatorKind, RootBundle};
use genus_core::localization::FixedComponent;
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = HalfInt> {
    prop::sample::select(vec![-4i64, -3, -2, -1, 1, 2, 3, 4]).prop_map(HalfInt::from_twice)
}

/// A fixed curve with one generator `x`, tangent root `c x`, one or two
/// normal lines and a rank-two `V`.
fn curve() -> impl Strategy<Value = FixedComponent> {
    (
        1i64..=2,
        prop::collection::vec((weight(), -2i64..=2), 1..=2),
        prop::collection::vec((weight(), -2i64..=2), 2..=2),
    )
        .prop_map(|(c, normals, v)| {
            let space = GradedSpace::new(vec![("x".into(), 2)], 2).unwrap();
            let x = GradedElement::generator(&space, 0);
            let line = |(m, a): (HalfInt, i64)| RootBundle::new(m, vec![x.scale(&int(a))]);
            FixedComponent {
                name: "curve".into(),
                space: space.clone(),
                tangent: RootBundle::new(HalfInt::ZERO, vec![x.scale(&int(c))]),
                normals: normals.into_iter().map(line).collect(),
                vbundles: v.into_iter().map(line).collect(),
                table: IntegrationTable::new(1, vec!["x".into()], BTreeMap::from([(vec![1u16], int(1))])),
                orientation: 1,
            }
        })
}

fn kind() -> impl Strategy<Value = OperatorKind> {
    prop::sample::select(OperatorKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Theta quotients and the Lambda/S expansion agree exactly.
    #[test]
    fn closed_form_matches_expansion(comp in curve(), kind in kind()) {
        let norm = kind.default_normalization();
        let r = oracle_expand_vs_closed(kind, norm, &comp, 16).unwrap();
        prop_assert!(r.equal, "{:?}", r);
    }

    /// `t -> -t` on the integrand is the same as negating every weight.
    #[test]
    fn weight_negation_is_w_inversion(comp in curve(), kind in kind()) {
        let norm = kind.default_normalization();
        let a = theta_quotient_integrand(kind, norm, &comp, 16).unwrap();
        let b = theta_quotient_integrand(kind, norm, &comp.negate_weights(), 16).unwrap();
        prop_assert_eq!(a.w_half, b.w_half);
        prop_assert_eq!(a.ledger, b.ledger);
        let flipped = a.series.map(|g| g.map_coeffs(|c| c.invert_w().shift(-a.w_half)));
        prop_assert_eq!(flipped, b.series);
    }

    #[test]
    fn a_hat_is_multiplicative(r in prop::collection::vec(-3i64..=3, 1..4), s in prop::collection::vec(-3i64..=3, 1..4)) {
        let space = GradedSpace::new(vec![("x".into(), 2), ("y".into(), 2)], 6).unwrap();
        let x = GradedElement::generator(&space, 0);
        let y = GradedElement::generator(&space, 1);
        let roots = |v: &[i64]| -> Vec<GradedElement> {
            v.iter().enumerate().map(|(i, a)| x.scale(&int(*a)).add(&y.scale(&int(i as i64 + 1)))).collect()
        };
        let e = RootBundle::new(HalfInt::ZERO, roots(&r));
        let f = RootBundle::new(HalfInt::ZERO, roots(&s));
        let ef = RootBundle::new(HalfInt::ZERO, [roots(&r), roots(&s)].concat());
        prop_assert_eq!(a_hat(&ef, &space), a_hat(&e, &space).mul(&a_hat(&f, &space)));
    }
}

proptest! {
    #[test]
    fn borel_weil_symmetries(k in 0i64..40) {
        let c = borel_weil_character(k);
        prop_assert_eq!(c.invert_w(), c.clone());
        prop_assert_eq!(borel_weil_character(-k - 2), c.neg());
    }
}
