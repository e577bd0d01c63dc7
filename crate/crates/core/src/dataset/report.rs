//! JSON reports. Rationals are `"p/q"` strings, `q` exponents `"n/8"`.

use num_complex::Complex64;
use num_integer::Integer;
use serde_json::{json, Map, Value};

use super::FORMAT;
use crate::algebra::{rat_string, WLaurentPoly, WLaurentRational};
use crate::jacobi::{ComponentJacobiReport, ZeroCount};
use crate::localization::{base_monomials, GenusResult, RigidityVerdict};

pub fn q_exponent(n8: i64) -> String {
    format!("{n8}/8")
}

fn poly_json(p: &WLaurentPoly) -> Value {
    let m: Map<String, Value> = p.terms().map(|(e, c)| (e.to_string(), json!(rat_string(c)))).collect();
    Value::Object(m)
}

/// `{"text", "numerator": {w-exponent: "p/q"}, "denominator": {...}}`.
pub fn wrational_json(r: &WLaurentRational) -> Value {
    json!({
        "text": r.to_string(),
        "numerator": poly_json(r.numer()),
        "denominator": poly_json(r.denom()),
    })
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// The exponent grid every coefficient is printed on: from the lowest
/// stored exponent (or 0) through the truncation, in the common step.
fn exponent_grid(result: &GenusResult) -> Vec<i64> {
    let exps: Vec<i64> = result.series.terms().map(|(e, _)| e).collect();
    let lo = exps.first().copied().unwrap_or(0);
    let step = exps.iter().fold(8i64, |g, e| g.gcd(&(e - lo))).max(1);
    (0..)
        .map(|j| lo + j * step)
        .take_while(|e| *e <= result.n8)
        .collect()
}

pub fn genus_result_json(result: &GenusResult, dataset: &str) -> Value {
    let grid = exponent_grid(result);
    let components: Vec<Value> = base_monomials(&result.base)
        .into_iter()
        .map(|m| {
            let coefficients: Vec<Value> = grid
                .iter()
                .map(|&e| {
                    let c = result
                        .series
                        .coeff(e)
                        .map(|g| g.coeff(&m))
                        .unwrap_or_else(WLaurentRational::zero);
                    json!({"q": q_exponent(e), "value": wrational_json(&c)})
                })
                .collect();
            json!({
                "monomial": result.base.format_monomial(&m),
                "degree": result.base.degree_of(&m),
                "coefficients": coefficients,
            })
        })
        .collect();
    json!({
        "format": FORMAT,
        "dataset": dataset,
        "provenance": result.provenance,
        "operator": result.kind.name(),
        "normalization": result.normalization.name(),
        "order": q_exponent(result.n8),
        "zero": result.is_zero(),
        "prefactor": {
            "w_half": result.w_half,
            "ledger": {
                "two_pi": result.ledger.two_pi,
                "i_pow": result.ledger.i_pow,
                "two": result.ledger.two,
                "text": result.ledger.to_string(),
            },
        },
        "components": components,
    })
}

pub fn rigidity_json(v: &RigidityVerdict) -> Value {
    match v {
        RigidityVerdict::Rigid { constants } => json!({
            "verdict": "rigid",
            "constants": constants
                .iter()
                .map(|c| json!({"q": q_exponent(c.q8), "monomial": c.monomial, "value": c.value}))
                .collect::<Vec<_>>(),
        }),
        RigidityVerdict::NotRigid { q8, monomial, coefficient } => json!({
            "verdict": "not-rigid",
            "witness": {"q": q_exponent(*q8), "monomial": monomial, "coefficient": coefficient},
        }),
    }
}

pub fn jacobi_json(reports: &[ComponentJacobiReport], base: &crate::algebra::GradedSpace) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                let rep = &r.report;
                json!({
                    "monomial": base.format_monomial(&r.monomial),
                    "formal_zero": r.formal_zero,
                    "index": rep.spec.index.to_string(),
                    "weight": rep.spec.weight,
                    "group": rep.spec.group.name(),
                    "lattice": format!("{:?}", rep.spec.lattice),
                    "generators": rep.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "samples": rep.samples,
                    "modular_max": rep.modular_max,
                    "lattice_max": rep.lattice_max,
                    "max_discrepancy": rep.max_discrepancy,
                    "eps": rep.eps,
                    "pass": rep.pass,
                })
            })
            .collect(),
    )
}

pub fn zero_count_json(z: &ZeroCount) -> Value {
    match z {
        ZeroCount::Count { value, perturbations, panels } => json!({
            "outcome": "count",
            "value": value,
            "rounded": z.rounded(),
            "perturbations": perturbations,
            "panels": panels,
        }),
        ZeroCount::IdenticallyZero { max_abs } => json!({"outcome": "identically-zero", "max_abs": max_abs}),
    }
}
