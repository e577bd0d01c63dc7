//! Browser bindings: catalog listing, q-expansion, rigidity and theta values.
//! Every export returns a JSON string, or an error message.

use genus_core::catalog;
use genus_core::dataset::{complex_json, genus_result_json, rigidity_json};
use genus_core::genera::OperatorKind;
use genus_core::localization::{anomaly_index, equivariant_character, rigidity_check};
use genus_core::theta::{theta_formal, theta_numeric, ThetaKind};
use genus_core::algebra::HalfInt;
use num_complex::Complex64;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Orders above this take too long for an interactive page.
const MAX_ORDER: i64 = 96;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[wasm_bindgen]
pub fn catalog_json() -> String {
    let entries: Vec<_> = catalog::all()
        .into_iter()
        .map(|e| {
            let ops: Vec<&str> = OperatorKind::ALL
                .into_iter()
                .filter(|k| !k.uses_v() || e.data.has_v())
                .map(|k| k.name())
                .collect();
            json!({"name": e.name, "doc": e.doc, "operators": ops})
        })
        .collect();
    json!(entries).to_string()
}

#[wasm_bindgen]
pub fn expand(entry: &str, operator: &str, order: i64) -> Result<String, String> {
    if !(0..=MAX_ORDER).contains(&order) {
        return Err(format!("order must lie in 0..={MAX_ORDER} eighths"));
    }
    let data = catalog::builtin(entry).map_err(err)?.data;
    let kind: OperatorKind = operator.parse().map_err(err)?;
    let r = equivariant_character(&data, kind, kind.default_normalization(), order).map_err(err)?;
    Ok(genus_result_json(&r, &data.name).to_string())
}

#[wasm_bindgen]
pub fn rigidity(entry: &str, order: i64) -> Result<String, String> {
    if !(0..=MAX_ORDER).contains(&order) {
        return Err(format!("order must lie in 0..={MAX_ORDER} eighths"));
    }
    let data = catalog::builtin(entry).map_err(err)?.data;
    let mut rows = Vec::new();
    for kind in OperatorKind::ALL.into_iter().filter(|k| !k.uses_v() || data.has_v()) {
        let r = equivariant_character(&data, kind, kind.default_normalization(), order).map_err(err)?;
        let mut v = rigidity_json(&rigidity_check(&r));
        v["operator"] = json!(kind.name());
        rows.push(v);
    }
    Ok(json!({
        "dataset": data.name,
        "anomaly": anomaly_index(&data).ok(),
        "operators": rows,
    })
    .to_string())
}

/// `theta_kind(t, tau)` numerically and from its series at order 64/8.
#[wasm_bindgen]
pub fn theta(kind: &str, t_re: f64, t_im: f64, tau_re: f64, tau_im: f64) -> Result<String, String> {
    let kind: ThetaKind = kind.parse().map_err(err)?;
    let t = Complex64::new(t_re, t_im);
    let tau = Complex64::new(tau_re, tau_im);
    let numeric = theta_numeric(kind, t, tau, 1e-14).map_err(err)?;
    let formal = theta_formal(kind, HalfInt::from_int(1), 64).eval(t, tau);
    Ok(json!({
        "numeric": complex_json(numeric),
        "formal": complex_json(formal),
        "relative_difference": (numeric - formal).norm() / numeric.norm().max(1.0),
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_produce_json() {
        let c: serde_json::Value = serde_json::from_str(&catalog_json()).unwrap();
        assert!(c.as_array().unwrap().len() >= 6);
        let e: serde_json::Value = serde_json::from_str(&expand("s2-rotation", "h", 16).unwrap()).unwrap();
        assert_eq!(e["zero"], true);
        let r: serde_json::Value = serde_json::from_str(&rigidity("s2-rotation", 16).unwrap()).unwrap();
        assert_eq!(r["operators"][0]["verdict"], "rigid");
        let t: serde_json::Value = serde_json::from_str(&theta("theta3", 0.1, 0.0, 0.0, 1.0).unwrap()).unwrap();
        assert!(t["relative_difference"].as_f64().unwrap() < 1e-12);
        assert!(expand("s2-rotation", "h", 1000).is_err());
        assert!(theta("theta9", 0.0, 0.0, 0.0, 1.0).is_err());
    }
}
