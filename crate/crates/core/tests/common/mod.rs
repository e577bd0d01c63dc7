#![allow(dead_code)]

use std::collections::BTreeMap;

use genus_core::algebra::{int, GradedElement, GradedSpace, HalfInt, IntegrationTable, Rat, Ring};
use genus_core::genera::RootBundle;
use genus_core::localization::{ActionData, FixedComponent};
use num_traits::One;

/// CP^2 with weights (0, 0, 1): a fixed CP^1 with normal line O(1) of
/// weight 1, and the isolated point [0:0:1] with weights (-1, -1).
pub fn cp2_with_curve() -> ActionData {
    let base = GradedSpace::point();
    let space = GradedSpace::new(vec![("h".into(), 2)], 2).unwrap();
    let hcls = GradedElement::generator(&space, 0);
    let mut entries = BTreeMap::new();
    entries.insert(vec![1u16], Rat::one());
    let curve = FixedComponent {
        name: "line".into(),
        space: space.clone(),
        tangent: RootBundle::new(HalfInt::ZERO, vec![hcls.scale(&int(2))]),
        normals: vec![RootBundle::new(HalfInt::from_int(1), vec![hcls.clone()])],
        vbundles: vec![],
        table: IntegrationTable::new(1, vec!["h".into()], entries),
        orientation: 1,
    };
    let zero = GradedElement::zero(&base);
    let pt = FixedComponent {
        name: "point".into(),
        space: base.clone(),
        tangent: RootBundle::new(HalfInt::ZERO, vec![]),
        normals: vec![RootBundle::new(HalfInt::from_int(-1), vec![zero.clone(), zero])],
        vbundles: vec![],
        table: IntegrationTable::point(),
        orientation: 1,
    };
    ActionData {
        name: "cp2".into(),
        k: 2,
        l: None,
        base,
        components: vec![curve, pt],
        declared_anomaly: None,
    }
}
