mod common;

use genus_core::catalog;
use genus_core::dataset::{canonical_json, genus_result_json, parse_dataset, to_json_pretty};
use genus_core::genera::OperatorKind;
use genus_core::localization::{equivariant_character, validate};

#[test]
fn builtin_entries_round_trip() {
    let mut all: Vec<_> = catalog::all().into_iter().map(|e| e.data).collect();
    all.push(common::cp2_with_curve());
    for data in all {
        let text = to_json_pretty(&data).unwrap();
        let back = parse_dataset(&text, "unused").unwrap();
        assert_eq!(back, data, "{}", data.name);
        assert_eq!(canonical_json(&back).unwrap(), canonical_json(&data).unwrap());
        assert!(validate(&back).is_valid());
        for kind in [OperatorKind::DThetaQ, OperatorKind::WittenH, OperatorKind::DVStarDifference] {
            if kind.uses_v() != data.has_v() {
                continue;
            }
            let norm = kind.default_normalization();
            let a = equivariant_character(&data, kind, norm, 16).unwrap();
            let b = equivariant_character(&back, kind, norm, 16).unwrap();
            assert_eq!(
                genus_result_json(&a, &data.name).to_string(),
                genus_result_json(&b, &back.name).to_string()
            );
        }
    }
}

#[test]
fn report_prints_zero_coefficients() {
    let data = catalog::builtin("s2-rotation").unwrap().data;
    let r = equivariant_character(&data, OperatorKind::WittenH, OperatorKind::WittenH.default_normalization(), 48)
        .unwrap();
    let j = genus_result_json(&r, "s2-rotation");
    let coeffs = j["components"][0]["coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 7);
    assert_eq!(coeffs[6]["q"], "48/8");
    assert!(coeffs.iter().all(|c| c["value"]["text"] == "0"));
    assert_eq!(coeffs[1]["q"], "8/8");
    assert_eq!(j["format"], 1);
}

#[test]
fn hand_written_document() {
    let doc = r#"{
      "format": 1,
      "name": "s2-family",
      "fiber_half_dim": 1,
      "v_half_rank": 2,
      "base_generators": [{"name": "b", "degree": 2}],
      "base_degree_cap": 4,
      "components": [
        {"name": "north", "k_alpha": 0, "tangent_roots": [],
         "normals": [{"weight": 1, "rank": 1, "roots": ["b"]}],
         "v": [{"weight": -1, "rank": 1, "roots": ["3/5 b"]}, {"weight": 2, "rank": 1, "roots": ["4/5 b"]}],
         "sign": 1},
        {"name": "south", "k_alpha": 0, "tangent_roots": [],
         "normals": [{"weight": -1, "rank": 1, "roots": ["-b"]}],
         "v": [{"weight": -1, "rank": 1, "roots": ["3/5*b"]}, {"weight": "-2", "rank": 1, "roots": ["-4/5 b"]}],
         "sign": 1}
      ],
      "declared_anomaly": 4
    }"#;
    let parsed = parse_dataset(doc, "x").unwrap();
    let builtin = catalog::builtin("s2-family-base").unwrap().data;
    assert_eq!(parsed.components, builtin.components);
    assert_eq!(parsed.base, builtin.base);
}

#[test]
fn semantic_problems_survive_parsing_and_fail_validation() {
    let doc = r#"{"format": 1, "fiber_half_dim": 1, "base_degree_cap": 0,
      "components": [{"name": "p", "k_alpha": 0, "tangent_roots": [], "normals": [{"weight": 0, "rank": 1}]}]}"#;
    let data = parse_dataset(doc, "bad").unwrap();
    assert!(!validate(&data).is_valid());
}
