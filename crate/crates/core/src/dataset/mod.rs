//! JSON dataset documents (`format: 1`) and machine-readable reports.

mod report;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{parse_rat, rat_string, GradedElement, GradedSpace, HalfInt, IntegrationTable, Rat, Ring};
use crate::error::{Error, Result};
use crate::genera::RootBundle;
use crate::localization::{ActionData, FixedComponent};

pub use report::{
    complex_json, genus_result_json, jacobi_json, q_exponent, rigidity_json, wrational_json, zero_count_json,
};

pub const FORMAT: u64 = 1;

/// Canonical JSON text of a dataset: compact, keys sorted.
pub fn canonical_json(data: &ActionData) -> Result<String> {
    Ok(to_json(data)?.to_string())
}

/// SHA-256 of the canonical JSON.
pub fn canonical_digest(data: &ActionData) -> Result<String> {
    let mut h = Sha256::new();
    h.update(canonical_json(data)?.as_bytes());
    Ok(hex::encode(h.finalize()))
}

// ---------------------------------------------------------------- parsing

/// Parse-phase failure at a JSON path.
fn at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

struct Obj<'a> {
    path: String,
    map: &'a Map<String, Value>,
}

impl<'a> Obj<'a> {
    fn new(path: String, v: &'a Value, allowed: &[&str]) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| at(&path, "expected an object"))?;
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(at(&path, format!("unknown key `{k}`")));
        }
        Ok(Self { path, map })
    }

    fn sub(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn req(&self, key: &str) -> Result<&'a Value> {
        self.get(key).ok_or_else(|| at(&self.path_or_root(), format!("missing key `{key}`")))
    }

    fn path_or_root(&self) -> String {
        if self.path.is_empty() {
            "<root>".into()
        } else {
            self.path.clone()
        }
    }

    fn int(&self, key: &str) -> Result<i64> {
        self.req(key)?.as_i64().ok_or_else(|| at(&self.sub(key), "expected an integer"))
    }

    fn opt_int(&self, key: &str) -> Result<Option<i64>> {
        match self.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v.as_i64().map(Some).ok_or_else(|| at(&self.sub(key), "expected an integer")),
        }
    }

    fn nonneg(&self, key: &str) -> Result<usize> {
        let v = self.int(key)?;
        usize::try_from(v).map_err(|_| at(&self.sub(key), "expected a nonnegative integer"))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.req(key)?.as_str().ok_or_else(|| at(&self.sub(key), "expected a string"))
    }

    fn array(&self, key: &str) -> Result<&'a Vec<Value>> {
        self.req(key)?.as_array().ok_or_else(|| at(&self.sub(key), "expected an array"))
    }

    fn opt_array(&self, key: &str) -> Result<Option<&'a Vec<Value>>> {
        match self.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v.as_array().map(Some).ok_or_else(|| at(&self.sub(key), "expected an array")),
        }
    }
}

/// JSON parse errors carry line and column (serde_json appends them).
fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_weight(path: &str, v: &Value) -> Result<HalfInt> {
    let bad = || at(path, "expected an integer, a half-integer, or a string like \"3/2\"");
    match v {
        Value::Number(n) => n.as_f64().and_then(HalfInt::from_f64).ok_or_else(bad),
        Value::String(s) => HalfInt::parse(s).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn weight_json(w: HalfInt) -> Value {
    if w.is_integer() {
        json!(w.twice() / 2)
    } else {
        json!(w.to_string())
    }
}

fn parse_rational(path: &str, v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| at(path, e)),
        Value::Number(n) if n.is_i64() => Ok(crate::algebra::int(n.as_i64().unwrap_or_default())),
        _ => Err(at(path, "expected a rational string \"p/q\"")),
    }
}

/// Parses `"b"`, `"-2 h"`, `"3/5 b - 4/5*h + 1/2 c"`, `"0"`.
pub fn parse_root(expr: &str, space: &Arc<GradedSpace>) -> Result<GradedElement> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty root expression".into()));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() && !cur.ends_with('/') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && cur.is_empty() {
            neg ^= ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("`{expr}` ends with an operator")));
    }
    terms.push((neg, cur));
    let mut acc = GradedElement::zero(space);
    for (neg, term) in terms {
        let split = term.find(|c: char| c.is_ascii_alphabetic() || c == '_');
        let (coef, name) = match split {
            Some(i) => (term[..i].trim_end_matches('*'), Some(&term[i..])),
            None => (term.as_str(), None),
        };
        let mut c = if coef.is_empty() {
            crate::algebra::int(1)
        } else {
            parse_rat(coef).map_err(|_| Error::Parse(format!("bad coefficient `{coef}` in `{expr}`")))?
        };
        if neg {
            c = -c;
        }
        let piece = match name {
            None => GradedElement::constant(space, c),
            Some(n) => {
                let g = GradedElement::generator_named(space, n)
                    .ok_or_else(|| Error::Parse(format!("unknown generator `{n}` in `{expr}`")))?;
                g.scale(&c)
            }
        };
        acc = acc.add(&piece);
    }
    Ok(acc)
}

pub fn format_root(root: &GradedElement) -> Result<String> {
    if root.num_terms() == 0 {
        return Ok("0".into());
    }
    let coeffs = root
        .linear_coefficients()
        .ok_or_else(|| Error::InvalidData("only linear roots can be serialized".into()))?;
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(root.space().names()) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let a = c.abs();
        let body = if a == crate::algebra::int(1) {
            name.clone()
        } else {
            format!("{} {name}", rat_string(&a))
        };
        if out.is_empty() {
            out = if sign == "-" { format!("-{body}") } else { body };
        } else {
            out = format!("{out} {sign} {body}");
        }
    }
    Ok(out)
}

fn parse_generators(path: &str, arr: Option<&Vec<Value>>) -> Result<Vec<(String, u32)>> {
    let mut out: Vec<(String, u32)> = Vec::new();
    for (i, g) in arr.into_iter().flatten().enumerate() {
        let o = Obj::new(format!("{path}[{i}]"), g, &["name", "degree"])?;
        let name = o.str("name")?.to_string();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(at(&o.sub("name"), format!("`{name}` is not an identifier")));
        }
        let degree = o.int("degree")?;
        if degree != 2 {
            return Err(at(&o.sub("degree"), "generators must have degree 2"));
        }
        if out.iter().any(|(n, _)| *n == name) {
            return Err(at(&o.sub("name"), format!("duplicate generator `{name}`")));
        }
        out.push((name, 2));
    }
    Ok(out)
}

fn parse_monomial(path: &str, key: &str, names: &[String]) -> Result<Vec<u16>> {
    let mut e = vec![0u16; names.len()];
    if key.trim() == "1" {
        return Ok(e);
    }
    for factor in key.split('*') {
        let f = factor.trim();
        let (n, p) = match f.split_once('^') {
            Some((n, p)) => (n.trim(), p.trim().parse::<u16>().map_err(|_| at(path, format!("bad power in `{key}`")))?),
            None => (f, 1),
        };
        let i = names
            .iter()
            .position(|g| g == n)
            .ok_or_else(|| at(path, format!("`{n}` is not a fiber generator of this component")))?;
        e[i] += p;
    }
    Ok(e)
}

fn parse_bundles(
    path: &str,
    arr: &[Value],
    space: &Arc<GradedSpace>,
    weight_required: bool,
) -> Result<Vec<RootBundle>> {
    arr.iter()
        .enumerate()
        .map(|(i, b)| {
            let o = Obj::new(format!("{path}[{i}]"), b, &["weight", "rank", "roots"])?;
            let weight = match o.get("weight") {
                Some(w) => parse_weight(&o.sub("weight"), w)?,
                None if weight_required => return Err(at(&o.path, "missing key `weight`")),
                None => HalfInt::ZERO,
            };
            let rank = o.nonneg("rank")?;
            let roots = match o.opt_array("roots")? {
                None => vec![GradedElement::zero(space); rank],
                Some(rs) => {
                    if rs.len() != rank {
                        return Err(at(&o.sub("roots"), format!("{} roots for rank {rank}", rs.len())));
                    }
                    rs.iter()
                        .enumerate()
                        .map(|(j, r)| {
                            let p = format!("{}.roots[{j}]", o.path);
                            let s = r.as_str().ok_or_else(|| at(&p, "expected a root expression string"))?;
                            parse_root(s, space).map_err(|e| at(&p, e))
                        })
                        .collect::<Result<_>>()?
                }
            };
            Ok(RootBundle::new(weight, roots))
        })
        .collect()
}

const TOP_KEYS: &[&str] = &[
    "format",
    "name",
    "fiber_half_dim",
    "v_half_rank",
    "base_generators",
    "base_degree_cap",
    "components",
    "declared_anomaly",
];

const COMPONENT_KEYS: &[&str] = &[
    "name",
    "k_alpha",
    "fiber_generators",
    "tangent_roots",
    "normals",
    "v",
    "integration_table",
    "sign",
];

/// Parse a dataset document. Structural problems are `Error::Parse` with
/// a JSON path; the result still has to pass `validate`.
pub fn parse_dataset(text: &str, default_name: &str) -> Result<ActionData> {
    let root = parse_value(text)?;
    let top = Obj::new(String::new(), &root, TOP_KEYS)?;
    match top.get("format") {
        Some(v) if v.as_u64() == Some(FORMAT) => {}
        Some(_) => return Err(at("format", format!("unsupported format (expected {FORMAT})"))),
        None => return Err(at("<root>", "missing key `format`")),
    }
    let name = match top.get("name") {
        Some(v) => v.as_str().ok_or_else(|| at("name", "expected a string"))?.to_string(),
        None => default_name.to_string(),
    };
    let k = top.nonneg("fiber_half_dim")?;
    let l = match top.opt_int("v_half_rank")? {
        None => None,
        Some(v) => Some(usize::try_from(v).map_err(|_| at("v_half_rank", "expected a nonnegative integer"))?),
    };
    let base_gens = parse_generators("base_generators", top.opt_array("base_generators")?)?;
    let cap = top.int("base_degree_cap")?;
    if cap < 0 || cap % 2 != 0 {
        return Err(at("base_degree_cap", "expected an even nonnegative integer"));
    }
    let base = GradedSpace::new(base_gens.clone(), cap as u32).map_err(|e| at("base_generators", e))?;
    let comps = top.array("components")?;
    if comps.is_empty() {
        return Err(at("components", "at least one fixed component is required"));
    }
    let mut components = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        let o = Obj::new(format!("components[{i}]"), c, COMPONENT_KEYS)?;
        let cname = o.str("name")?.to_string();
        let k_alpha = o.nonneg("k_alpha")?;
        let fiber = parse_generators(&o.sub("fiber_generators"), o.opt_array("fiber_generators")?)?;
        if let Some((n, _)) = fiber.iter().find(|(n, _)| base_gens.iter().any(|(b, _)| b == n)) {
            return Err(at(&o.sub("fiber_generators"), format!("`{n}` is also a base generator")));
        }
        let fiber_names: Vec<String> = fiber.iter().map(|(n, _)| n.clone()).collect();
        let mut gens = fiber.clone();
        gens.extend(base_gens.iter().cloned());
        let space = GradedSpace::new(gens, 2 * k_alpha as u32 + cap as u32).map_err(|e| at(&o.path, e))?;
        let tangent_roots: Vec<GradedElement> = o
            .array("tangent_roots")?
            .iter()
            .enumerate()
            .map(|(j, r)| {
                let p = format!("{}.tangent_roots[{j}]", o.path);
                let s = r.as_str().ok_or_else(|| at(&p, "expected a root expression string"))?;
                parse_root(s, &space).map_err(|e| at(&p, e))
            })
            .collect::<Result<_>>()?;
        if tangent_roots.len() != k_alpha {
            return Err(at(
                &o.sub("tangent_roots"),
                format!("{} roots but k_alpha = {k_alpha}", tangent_roots.len()),
            ));
        }
        let normals = parse_bundles(&o.sub("normals"), o.array("normals")?, &space, true)?;
        let vbundles = match o.opt_array("v")? {
            None => Vec::new(),
            Some(v) => parse_bundles(&o.sub("v"), v, &space, true)?,
        };
        let table = match o.get("integration_table") {
            None if k_alpha == 0 => IntegrationTable::point(),
            None => return Err(at(&o.path, "missing key `integration_table`")),
            Some(t) => {
                let p = o.sub("integration_table");
                let map = t.as_object().ok_or_else(|| at(&p, "expected an object"))?;
                let mut entries = BTreeMap::new();
                for (key, val) in map {
                    let kp = format!("{p}.{key}");
                    let e = parse_monomial(&kp, key, &fiber_names)?;
                    entries.insert(e, parse_rational(&kp, val)?);
                }
                if k_alpha == 0 && fiber_names.is_empty() {
                    IntegrationTable::point()
                } else {
                    IntegrationTable::new(k_alpha as u32, fiber_names.clone(), entries)
                }
            }
        };
        let sign = match o.get("sign") {
            None => 1,
            Some(v) => match v.as_i64() {
                Some(1) => 1,
                Some(-1) => -1,
                _ => return Err(at(&o.sub("sign"), "expected 1 or -1")),
            },
        };
        components.push(FixedComponent {
            name: cname,
            space,
            tangent: RootBundle::new(HalfInt::ZERO, tangent_roots),
            normals,
            vbundles,
            table,
            orientation: sign,
        });
    }
    Ok(ActionData {
        name,
        k,
        l,
        base,
        components,
        declared_anomaly: top.opt_int("declared_anomaly")?,
    })
}

// ---------------------------------------------------------- serialization

fn bundle_json(b: &RootBundle) -> Result<Value> {
    Ok(json!({
        "weight": weight_json(b.weight),
        "rank": b.rank(),
        "roots": b.roots.iter().map(format_root).collect::<Result<Vec<_>>>()?,
    }))
}

fn generators_json(space: &GradedSpace, names: &[String]) -> Vec<Value> {
    names
        .iter()
        .map(|n| {
            let d = space.index_of(n).map(|i| space.degrees()[i]).unwrap_or(2);
            json!({"name": n, "degree": d})
        })
        .collect()
}

pub fn to_json(data: &ActionData) -> Result<Value> {
    let base_names = data.base.names().to_vec();
    let mut top = Map::new();
    top.insert("format".into(), json!(FORMAT));
    top.insert("name".into(), json!(data.name));
    top.insert("fiber_half_dim".into(), json!(data.k));
    if let Some(l) = data.l {
        top.insert("v_half_rank".into(), json!(l));
    }
    if !base_names.is_empty() {
        top.insert("base_generators".into(), json!(generators_json(&data.base, &base_names)));
    }
    top.insert("base_degree_cap".into(), json!(data.base.cap()));
    let mut comps = Vec::new();
    for c in &data.components {
        let fiber: Vec<String> = c.table.generators().to_vec();
        let space_fiber: Vec<String> = c
            .space
            .names()
            .iter()
            .filter(|n| !base_names.contains(n))
            .cloned()
            .collect();
        if !fiber.is_empty() && fiber != space_fiber {
            return Err(Error::InvalidData(format!(
                "component `{}`: table generators must be the non-base generators in order",
                c.name
            )));
        }
        let mut o = Map::new();
        o.insert("name".into(), json!(c.name));
        o.insert("k_alpha".into(), json!(c.fiber_half_dim()));
        if !space_fiber.is_empty() {
            o.insert("fiber_generators".into(), json!(generators_json(&c.space, &space_fiber)));
        }
        o.insert(
            "tangent_roots".into(),
            json!(c.tangent.roots.iter().map(format_root).collect::<Result<Vec<_>>>()?),
        );
        o.insert("normals".into(), json!(c.normals.iter().map(bundle_json).collect::<Result<Vec<_>>>()?));
        if !c.vbundles.is_empty() {
            o.insert("v".into(), json!(c.vbundles.iter().map(bundle_json).collect::<Result<Vec<_>>>()?));
        }
        if c.table.fiber_half_dim() > 0 || !c.table.entries().is_empty() {
            let names: Vec<String> = c.table.generators().to_vec();
            let mut t = Map::new();
            for (e, v) in c.table.entries() {
                let parts: Vec<String> = e
                    .iter()
                    .zip(&names)
                    .filter(|(&k, _)| k > 0)
                    .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
                    .collect();
                let key = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
                t.insert(key, json!(rat_string(v)));
            }
            o.insert("integration_table".into(), Value::Object(t));
        }
        o.insert("sign".into(), json!(c.orientation));
        comps.push(Value::Object(o));
    }
    top.insert("components".into(), Value::Array(comps));
    if let Some(n) = data.declared_anomaly {
        top.insert("declared_anomaly".into(), json!(n));
    }
    Ok(Value::Object(top))
}

pub fn to_json_pretty(data: &ActionData) -> Result<String> {
    serde_json::to_string_pretty(&to_json(data)?).map_err(|e| Error::InvalidData(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> Arc<GradedSpace> {
        GradedSpace::new(vec![("h".into(), 2), ("b".into(), 2)], 4).unwrap()
    }

    #[test]
    fn root_expressions() {
        let s = space();
        for (src, canon) in [
            ("b", "b"),
            ("-2 h", "-2 h"),
            ("3/5 b - 4/5*h", "-4/5 h + 3/5 b"),
            ("h+b-h", "b"),
            ("0", "0"),
            ("-1/2h", "-1/2 h"),
        ] {
            let r = parse_root(src, &s).unwrap();
            assert_eq!(format_root(&r).unwrap(), canon, "{src}");
            assert_eq!(parse_root(canon, &s).unwrap(), r);
        }
        assert!(parse_root("x", &s).is_err());
        assert!(parse_root("b +", &s).is_err());
        assert!(parse_root("1/0 b", &s).is_err());
    }

    #[test]
    fn field_addressed_errors() {
        let doc = r#"{"format":1,"fiber_half_dim":1,"base_degree_cap":0,
            "components":[{"name":"n","k_alpha":0,"tangent_roots":[],"normals":[{"weight":"x","rank":1}]}]}"#;
        let e = parse_dataset(doc, "t").unwrap_err().to_string();
        assert!(e.contains("components[0].normals[0].weight"), "{e}");
        let e = parse_dataset("{\"format\":1,\n \"oops\"", "t").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_dataset(r#"{"format":2}"#, "t").unwrap_err().to_string();
        assert!(e.contains("format"), "{e}");
    }
}
