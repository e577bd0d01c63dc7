use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::{factorial, fmt_rat, Coeff, Rat, Ring, WLaurentRational};
use crate::error::{Error, Result};

/// Generator table shared by graded elements: names, even degrees, and the
/// degree cap above which products are discarded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<u32>,
    cap: u32,
}

impl GradedSpace {
    pub fn new(generators: Vec<(String, u32)>, cap: u32) -> Result<Arc<Self>> {
        if cap % 2 != 0 {
            return Err(Error::InvalidData(format!("degree cap {cap} is odd")));
        }
        let mut names = Vec::with_capacity(generators.len());
        let mut degrees = Vec::with_capacity(generators.len());
        for (name, deg) in generators {
            if deg == 0 || deg % 2 != 0 {
                return Err(Error::InvalidData(format!(
                    "generator `{name}` has degree {deg}; degrees must be even and positive"
                )));
            }
            if names.contains(&name) {
                return Err(Error::InvalidData(format!("generator `{name}` listed twice")));
            }
            names.push(name);
            degrees.push(deg);
        }
        Ok(Arc::new(Self { names, degrees, cap }))
    }

    /// Space with no generators: only constants.
    pub fn point() -> Arc<Self> {
        Arc::new(Self {
            names: Vec::new(),
            degrees: Vec::new(),
            cap: 0,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree_of(&self, exps: &[u16]) -> u32 {
        exps.iter()
            .zip(&self.degrees)
            .map(|(&e, &d)| e as u32 * d)
            .sum()
    }

    /// All monomials of exactly degree `deg`.
    pub fn monomials_of_degree(&self, deg: u32) -> Vec<Vec<u16>> {
        fn rec(space: &GradedSpace, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            if i == space.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let d = space.degrees[i];
            let mut e = 0u16;
            while e as u32 * d <= left {
                cur.push(e);
                rec(space, i + 1, left - e as u32 * d, cur, out);
                cur.pop();
                e += 1;
            }
        }
        let mut out = Vec::new();
        rec(self, 0, deg, &mut Vec::new(), &mut out);
        out
    }

    pub fn format_monomial(&self, exps: &[u16]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(&self.names)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Truncated polynomial in even-degree generators with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct Graded<C> {
    space: Arc<GradedSpace>,
    terms: BTreeMap<Vec<u16>, C>,
}

pub type GradedElement = Graded<Rat>;
pub type WGraded = Graded<WLaurentRational>;

impl<C: Coeff> Graded<C> {
    pub fn zero(space: &Arc<GradedSpace>) -> Self {
        Self {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Arc<GradedSpace>) -> Self {
        Self::constant(space, C::one_elem())
    }

    pub fn constant(space: &Arc<GradedSpace>, c: C) -> Self {
        Self::monomial(space, vec![0; space.len()], c)
    }

    pub fn monomial(space: &Arc<GradedSpace>, exps: Vec<u16>, c: C) -> Self {
        let mut out = Self::zero(space);
        assert_eq!(exps.len(), space.len(), "monomial arity");
        if !c.is_zero_elem() && space.degree_of(&exps) <= space.cap {
            out.terms.insert(exps, c);
        }
        out
    }

    pub fn generator(space: &Arc<GradedSpace>, idx: usize) -> Self {
        let mut exps = vec![0; space.len()];
        exps[idx] = 1;
        Self::monomial(space, exps, C::one_elem())
    }

    pub fn generator_named(space: &Arc<GradedSpace>, name: &str) -> Option<Self> {
        space.index_of(name).map(|i| Self::generator(space, i))
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u16]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero_elem)
    }

    pub fn degree0(&self) -> C {
        self.coeff(&vec![0; self.space.len()])
    }

    pub fn is_nilpotent(&self) -> bool {
        self.degree0().is_zero_elem()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| self.space.degree_of(e)).max()
    }

    pub fn homogeneous(&self, deg: u32) -> Self {
        Self {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| self.space.degree_of(e) == deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Graded<D> {
        Graded {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let d = f(c);
                    (!d.is_zero_elem()).then(|| (e.clone(), d))
                })
                .collect(),
        }
    }

    /// Multiply every coefficient by `c`.
    pub fn mul_coeff(&self, c: &C) -> Self {
        if c.is_zero_elem() {
            return Self::zero(&self.space);
        }
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if !self.same_space(rhs) {
            return Err(Error::GeneratorTableMismatch);
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out: BTreeMap<Vec<u16>, C> = BTreeMap::new();
        let cap = self.space.cap;
        for (ea, ca) in &self.terms {
            let da = self.space.degree_of(ea);
            for (eb, cb) in &rhs.terms {
                if da + self.space.degree_of(eb) > cap {
                    continue;
                }
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let prod = ca.mul(cb);
                match out.get_mut(&e) {
                    Some(slot) => slot.add_assign(&prod),
                    None => {
                        out.insert(e, prod);
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero_elem());
        Self {
            space: self.space.clone(),
            terms: out,
        }
    }

    /// `exp(self)` for nilpotent `self`.
    pub fn exp(&self) -> Result<Self> {
        if !self.is_nilpotent() {
            return Err(Error::NonNilpotentInput);
        }
        let mut acc = Self::one(&self.space);
        let mut power = Self::one(&self.space);
        let mut k = 1u32;
        loop {
            power = power.mul_unchecked(self);
            if power.terms.is_empty() {
                break;
            }
            acc = acc.add(&power.scale(&factorial(k).recip()));
            k += 1;
        }
        Ok(acc)
    }

    /// Sum of `coeffs[k] * self^k`, truncated at the cap.
    pub fn power_series(&self, coeffs: &[C]) -> Self {
        let mut acc = Self::zero(&self.space);
        let mut power = Self::one(&self.space);
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                power = power.mul_unchecked(self);
                if power.terms.is_empty() {
                    break;
                }
            }
            if !c.is_zero_elem() {
                acc = acc.add(&power.mul_coeff(c));
            }
        }
        acc
    }
}

impl Graded<Rat> {
    /// Reinterpret with coefficients in another ring.
    pub fn lift<D: Coeff>(&self) -> Graded<D> {
        self.map_coeffs(|c| D::from_rat(c))
    }

    /// Evaluate at numeric generator values, ignoring the cap.
    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
                for (&k, x) in e.iter().zip(values) {
                    v *= x.powu(k as u32);
                }
                v
            })
            .sum()
    }

    /// Degree-2 linear form as coefficients per generator; `None` if the
    /// element has terms of any other degree.
    pub fn linear_coefficients(&self) -> Option<Vec<Rat>> {
        let mut out = vec![Rat::zero(); self.space.len()];
        for (e, c) in &self.terms {
            let nz: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
            if nz.len() != 1 || e[nz[0]] != 1 || self.space.degrees[nz[0]] != 2 {
                return None;
            }
            out[nz[0]] = c.clone();
        }
        Some(out)
    }
}

impl<C: Coeff> Ring for Graded<C> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.space)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.space)
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        assert!(self.same_space(rhs), "graded elements over different tables");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            match terms.get_mut(e) {
                Some(slot) => {
                    slot.add_assign(c);
                    if slot.is_zero_elem() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Self {
            space: self.space.clone(),
            terms,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        assert!(self.same_space(rhs), "graded elements over different tables");
        self.mul_unchecked(rhs)
    }
    fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }
    fn try_inverse(&self) -> Option<Self> {
        // (a0 + n)^-1 = a0^-1 * sum_j (-a0^-1 n)^j, finite because n is nilpotent.
        let a0 = self.degree0();
        let inv0 = a0.try_inverse()?;
        let mut n = self.clone();
        n.terms.remove(&vec![0; self.space.len()]);
        if n.terms.is_empty() {
            return Some(Self::constant(&self.space, inv0));
        }
        let step = n.mul_coeff(&inv0.neg());
        let mut acc = Self::one(&self.space);
        let mut power = Self::one(&self.space);
        loop {
            power = power.mul_unchecked(&step);
            if power.terms.is_empty() {
                break;
            }
            acc = acc.add(&power);
        }
        Some(acc.mul_coeff(&inv0))
    }
    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero_elem() {
            return Self::zero(&self.space);
        }
        self.map_coeffs(|c| c.scale(r))
    }
}

impl<C: Coeff> fmt::Display for Graded<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = self.space.format_monomial(e);
                let cs = c.to_string();
                if mono == "1" {
                    cs
                } else if cs == "1" {
                    mono
                } else if cs.contains(' ') {
                    format!("({cs})*{mono}")
                } else {
                    format!("{cs}*{mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for Graded<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graded[{}]({self})", self.space.names.join(","))
    }
}

pub fn graded_mul<C: Coeff>(a: &Graded<C>, b: &Graded<C>) -> Result<Graded<C>> {
    a.checked_mul(b)
}

pub fn graded_exp<C: Coeff>(a: &Graded<C>) -> Result<Graded<C>> {
    a.exp()
}

/// Values of the fiber integral on top-degree monomials of a fixed component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrationTable {
    fiber_half_dim: u32,
    generators: Vec<String>,
    entries: BTreeMap<Vec<u16>, Rat>,
}

impl IntegrationTable {
    pub fn new(fiber_half_dim: u32, generators: Vec<String>, entries: BTreeMap<Vec<u16>, Rat>) -> Self {
        Self {
            fiber_half_dim,
            generators,
            entries,
        }
    }

    /// Pushforward to a point of an isolated fixed point: the identity.
    pub fn point() -> Self {
        Self::new(0, Vec::new(), BTreeMap::new())
    }

    pub fn fiber_half_dim(&self) -> u32 {
        self.fiber_half_dim
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn entries(&self) -> &BTreeMap<Vec<u16>, Rat> {
        &self.entries
    }

    fn lookup(&self, fiber_exps: &[u16]) -> Option<Rat> {
        if let Some(v) = self.entries.get(fiber_exps) {
            return Some(v.clone());
        }
        (self.fiber_half_dim == 0 && fiber_exps.iter().all(|&e| e == 0)).then(Rat::one)
    }
}

/// Integrate out the fiber generators of `table`; the remaining generators
/// of `a` must all appear in `base`.
pub fn fiber_integrate<C: Coeff>(
    a: &Graded<C>,
    table: &IntegrationTable,
    base: &Arc<GradedSpace>,
) -> Result<Graded<C>> {
    let space = a.space();
    let mut fiber_slot = vec![None; space.len()];
    let mut base_slot = vec![None; space.len()];
    for (i, name) in space.names().iter().enumerate() {
        if let Some(j) = table.generators.iter().position(|g| g == name) {
            fiber_slot[i] = Some(j);
        } else if let Some(j) = base.index_of(name) {
            base_slot[i] = Some(j);
        } else {
            return Err(Error::GeneratorTableMismatch);
        }
    }
    let top = 2 * table.fiber_half_dim;
    let mut out = Graded::zero(base);
    for (e, c) in a.terms() {
        let mut fe = vec![0u16; table.generators.len()];
        let mut be = vec![0u16; base.len()];
        let mut fdeg = 0;
        for (i, &k) in e.iter().enumerate() {
            if let Some(j) = fiber_slot[i] {
                fe[j] = k;
                fdeg += k as u32 * space.degrees()[i];
            } else if let Some(j) = base_slot[i] {
                be[j] = k;
            }
        }
        if fdeg != top {
            continue;
        }
        let val = table.lookup(&fe).ok_or_else(|| {
            let names: Vec<(String, u32)> = table
                .generators
                .iter()
                .map(|g| (g.clone(), space.index_of(g).map_or(2, |i| space.degrees()[i])))
                .collect();
            let label = GradedSpace::new(names, top)
                .map(|s| s.format_monomial(&fe))
                .unwrap_or_else(|_| format!("{fe:?}"));
            Error::MissingTableEntry(label)
        })?;
        if val.is_zero_elem() {
            continue;
        }
        out = out.add(&Graded::monomial(base, be, c.scale(&val)));
    }
    Ok(out)
}

impl IntegrationTable {
    /// Entries rendered as `monomial -> "p/q"`.
    pub fn describe(&self, degrees: &[u32]) -> Vec<(String, String)> {
        let space = GradedSpace {
            names: self.generators.clone(),
            degrees: degrees.to_vec(),
            cap: 2 * self.fiber_half_dim,
        };
        self.entries
            .iter()
            .map(|(e, v)| (space.format_monomial(e), fmt_rat(v)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn space(names: &[&str], cap: u32) -> Arc<GradedSpace> {
        GradedSpace::new(names.iter().map(|n| (n.to_string(), 2)).collect(), cap).unwrap()
    }

    #[test]
    fn cap_truncates_products() {
        let s = space(&["x"], 2);
        let x = GradedElement::generator(&s, 0);
        assert!(x.mul(&x).is_zero_elem());
    }

    #[test]
    fn binomial_square() {
        let s = space(&["x", "y"], 4);
        let x = GradedElement::generator(&s, 0);
        let y = GradedElement::generator(&s, 1);
        let sq = x.add(&y).pow(2);
        let expect = x.mul(&x).add(&x.mul(&y).scale(&int(2))).add(&y.mul(&y));
        assert_eq!(sq, expect);
    }

    #[test]
    fn truncated_exponential() {
        let s = space(&["x"], 4);
        let x = GradedElement::generator(&s, 0);
        let e = graded_exp(&x).unwrap();
        let expect = GradedElement::one(&s).add(&x).add(&x.mul(&x).scale(&rat(1, 2)));
        assert_eq!(e, expect);
        assert_eq!(graded_exp(&GradedElement::one(&s)), Err(Error::NonNilpotentInput));
    }

    #[test]
    fn mismatched_tables_rejected() {
        let a = GradedElement::generator(&space(&["x"], 2), 0);
        let b = GradedElement::generator(&space(&["y"], 2), 0);
        assert_eq!(graded_mul(&a, &b), Err(Error::GeneratorTableMismatch));
    }

    #[test]
    fn fiber_integration_over_cp1_type_table() {
        let s = space(&["h", "b"], 4);
        let base = space(&["b"], 2);
        let mut entries = BTreeMap::new();
        entries.insert(vec![1], int(1));
        let table = IntegrationTable::new(1, vec!["h".into()], entries);
        let h = GradedElement::generator(&s, 0);
        let b = GradedElement::generator(&s, 1);
        // 1 + h + h*b integrates to 1 + b
        let a = GradedElement::one(&s).add(&h).add(&h.mul(&b));
        let r = fiber_integrate(&a, &table, &base).unwrap();
        let bb = GradedElement::generator(&base, 0);
        assert_eq!(r, GradedElement::one(&base).add(&bb));
        assert!(fiber_integrate(&GradedElement::one(&s), &table, &base).unwrap().is_zero_elem());
    }

    #[test]
    fn point_integration_is_identity() {
        let base = space(&["b"], 4);
        let b = GradedElement::generator(&base, 0);
        let a = GradedElement::one(&base).add(&b);
        assert_eq!(fiber_integrate(&a, &IntegrationTable::point(), &base).unwrap(), a);
    }

    #[test]
    fn missing_entry_is_reported() {
        let s = space(&["h"], 2);
        let table = IntegrationTable::new(1, vec!["h".into()], BTreeMap::new());
        let h = GradedElement::generator(&s, 0);
        assert_eq!(
            fiber_integrate(&h, &table, &GradedSpace::point()),
            Err(Error::MissingTableEntry("h".into()))
        );
    }

    #[test]
    fn inverse_of_unit_plus_nilpotent() {
        let s = space(&["x"], 6);
        let x = GradedElement::generator(&s, 0);
        let a = GradedElement::constant(&s, int(2)).add(&x);
        assert!(a.mul(&a.try_inverse().unwrap()).sub(&GradedElement::one(&s)).is_zero_elem());
    }
}
