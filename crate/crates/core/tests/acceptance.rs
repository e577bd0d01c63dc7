//! Acceptance criteria 1-10. One PASS/FAIL line per criterion; the process
//! exits nonzero if any line fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use genus_core::algebra::{int, HalfInt, Rat};
use genus_core::catalog::{self, oracle_check_s2};
use genus_core::genera::{oracle_expand_vs_closed, Normalization, OperatorKind};
use genus_core::jacobi::{
    check_degree, check_degree_with, count_zeros, Cell, ComponentFunction, JacobiFormSpec, ZeroCount,
    IDENTICALLY_ZERO_FLOOR,
};
use genus_core::localization::{
    anomaly_index, base_monomials, component_contributions, constants_are_integers, equivariant_character,
    pole_cancellation_check, rigidity_check, validate, ActionData, RigidityVerdict,
};
use genus_core::theta::{
    check_modular_st, check_quasi_periodicity, direct_product, relative_discrepancy, samples, theta_formal,
    ModularGenerator, ThetaKind,
};
use genus_core::Error;
use num_complex::Complex64;

const NON_V: [OperatorKind; 4] =
    [OperatorKind::DsThetaPrime, OperatorKind::DThetaQ, OperatorKind::DThetaMinusQ, OperatorKind::WittenH];
const WITH_V: [OperatorKind; 4] = [
    OperatorKind::DeltaVThetaPrime,
    OperatorKind::DVThetaQ,
    OperatorKind::DVThetaMinusQ,
    OperatorKind::DVStarDifference,
];

type Check = Result<String, String>;

fn entry(name: &str) -> ActionData {
    catalog::builtin(name).unwrap().data
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn applicable(data: &ActionData) -> Vec<OperatorKind> {
    OperatorKind::ALL.into_iter().filter(|k| !k.uses_v() || data.has_v()).collect()
}

/// Eight modular identities and eight quasi-periodicity laws at 20 points.
fn theta_laws() -> Check {
    let pts = samples(20, 2024);
    ensure(pts.iter().all(|p| p.tau.im >= 0.5), || "sample with Im tau < 0.5".into())?;
    let mut worst = 0.0f64;
    for kind in ThetaKind::ALL {
        for g in [ModularGenerator::S, ModularGenerator::T] {
            let r = check_modular_st(kind, g, &pts, 1e-9).map_err(e2s)?;
            ensure(r.pass, || r.to_string())?;
            worst = worst.max(r.max_discrepancy);
        }
    }
    // theta_v(t + 1) = s1 theta_v(t), theta_v(t + tau) = s2 q^{-1/2} e^{-2 pi i t} theta_v(t).
    let signs = |k: ThetaKind| match k {
        ThetaKind::Theta => (-1.0, -1.0),
        ThetaKind::Theta1 => (-1.0, 1.0),
        ThetaKind::Theta2 => (1.0, -1.0),
        ThetaKind::Theta3 => (1.0, 1.0),
    };
    let i = Complex64::i();
    for kind in ThetaKind::ALL {
        let (s1, s2) = signs(kind);
        let (mut d1, mut d2) = (0.0f64, 0.0f64);
        for p in &pts {
            let base = direct_product(kind, p.t, p.tau, 1e-15).map_err(e2s)?;
            let one = direct_product(kind, p.t + 1.0, p.tau, 1e-15).map_err(e2s)?;
            let tau = direct_product(kind, p.t + p.tau, p.tau, 1e-15).map_err(e2s)?;
            let factor = s2 * (-PI * i * p.tau).exp() * (-2.0 * PI * i * p.t).exp();
            d1 = d1.max(relative_discrepancy(one, base * s1));
            d2 = d2.max(relative_discrepancy(tau, base * factor));
        }
        ensure(d1 < 1e-9 && d2 < 1e-9, || format!("{kind}: t+1 {d1:.2e}, t+tau {d2:.2e}"))?;
        worst = worst.max(d1).max(d2);
        // and the (2Z)^2 form used for the operators
        for (l, a, b) in [(1, 2, 0), (1, 0, 2), (2, 2, 2)] {
            let r = check_quasi_periodicity(kind, l, a, b, &pts, 1e-9).map_err(e2s)?;
            ensure(r.pass, || r.to_string())?;
            worst = worst.max(r.max_discrepancy);
        }
    }
    Ok(format!("8 modular + 8 quasi-periodic identities, 20 points, max discrepancy {worst:.2e}"))
}

/// Brute-force product of the factors, in eighths of a q power.
fn product_series(sign: i64, n8: usize) -> Vec<i64> {
    let mut s = vec![0i64; n8 + 1];
    s[0] = 1;
    let mul = |s: &mut Vec<i64>, step: usize, c: i64| {
        for e in (step..=n8).rev() {
            s[e] += c * s[e - step];
        }
    };
    for n in 1..=n8 / 8 {
        mul(&mut s, 8 * n, -1);
    }
    for n in 1..=(n8 + 4) / 8 {
        mul(&mut s, 8 * n - 4, sign);
        mul(&mut s, 8 * n - 4, sign);
    }
    s
}

fn nullwerte() -> Check {
    const N8: usize = 64;
    for (kind, sign) in [(ThetaKind::Theta2, -1), (ThetaKind::Theta3, 1)] {
        let e = theta_formal(kind, HalfInt::ZERO, N8 as i64);
        ensure(e.w_half == 0 && e.ledger.is_one(), || format!("{kind}(0) carries a prefactor"))?;
        let brute = product_series(sign, N8);
        // Jacobi triple product: sum over n of (+-1)^n q^{n^2/2}.
        let mut sums = vec![0i64; N8 + 1];
        for n in -4i64..=4 {
            let ex = (4 * n * n) as usize;
            if ex <= N8 {
                sums[ex] += if sign < 0 && n % 2 != 0 { -1 } else { 1 };
            }
        }
        ensure(brute == sums, || format!("{kind}: product and sum oracles disagree"))?;
        for (ex, want) in brute.iter().enumerate() {
            let got = match e.series.coeff(ex as i64) {
                Some(c) => c.as_constant().ok_or_else(|| format!("{kind} q^{ex}/8 is not constant"))?,
                None => Rat::from_integer(0.into()),
            };
            ensure(got == int(*want), || format!("{kind} q^{ex}/8: {got} vs {want}"))?;
        }
    }
    Ok("theta2(0), theta3(0) equal the brute-force products and the square sums through q^8".into())
}

fn two_sphere_vanishing() -> Check {
    let data = entry("s2-rotation");
    let kind = OperatorKind::WittenH;
    let r = equivariant_character(&data, kind, Normalization::Raw, 48).map_err(e2s)?;
    ensure(r.is_zero(), || "WittenH on s2-rotation is not zero".into())?;
    let parts = component_contributions(&data, kind, Normalization::Raw, 48).map_err(e2s)?;
    ensure(parts.iter().all(|p| !p.series.is_zero()), || "a fixed point contributes zero".into())?;
    let poles = pole_cancellation_check(&parts);
    ensure(poles.components_have_poles && poles.cancels_entirely, || format!("{poles:?}"))?;
    ensure(!pole_cancellation_check(&parts[..1]).cancels_entirely, || "single point has no poles".into())?;
    Ok(format!("sum exactly 0 through q^6; {} nonzero pieces with cancelling poles", parts.len()))
}

fn rigidity_without_v() -> Check {
    let mut summary = Vec::new();
    for name in ["cp3-weighted", "s2xs2-birotation"] {
        let data = entry(name);
        for kind in NON_V {
            let r = equivariant_character(&data, kind, kind.default_normalization(), 32).map_err(e2s)?;
            let v = rigidity_check(&r);
            ensure(v.is_rigid(), || format!("{name} {kind}: {v:?}"))?;
            if kind == OperatorKind::DsThetaPrime {
                let q0 = v.constants().into_iter().find(|(e, _, _)| *e == 0).map(|c| c.2).unwrap_or_else(|| int(0));
                ensure(q0 == int(0), || format!("{name}: signature {q0}"))?;
                summary.push(format!("{name} signature {q0}"));
            }
        }
    }
    Ok(format!("4 operators rigid through q^4; {}", summary.join(", ")))
}

fn rigidity_with_v() -> Check {
    let data = entry("cp3-weighted").with_tangent_v();
    let n = anomaly_index(&data).map_err(e2s)?;
    ensure(n == 0, || format!("anomaly {n}"))?;
    let mut euler = None;
    for kind in WITH_V {
        let r = equivariant_character(&data, kind, kind.default_normalization(), 32).map_err(e2s)?;
        let v = rigidity_check(&r);
        ensure(v.is_rigid(), || format!("{kind}: {v:?}"))?;
        if kind == OperatorKind::DVStarDifference {
            euler = v.constants().into_iter().find(|(e, _, _)| *e == 0).map(|c| c.2);
        }
    }
    Ok(format!(
        "V = TX on cp3-weighted: anomaly 0, all 4 V operators rigid (D* constant {})",
        euler.map(|c| c.to_string()).unwrap_or_else(|| "0".into())
    ))
}

fn zero_count(data: &ActionData, kind: OperatorKind, tau: Complex64, cell: Cell) -> Result<ZeroCount, String> {
    let m = base_monomials(&data.base).remove(0);
    let f = ComponentFunction::new(data, kind, kind.default_normalization(), &m, 1e-14).map_err(e2s)?;
    count_zeros(&|t| f.eval(t, tau), tau, cell, IDENTICALLY_ZERO_FLOOR).map_err(e2s)
}

fn describe(z: &ZeroCount) -> String {
    match z {
        ZeroCount::Count { value, .. } => format!("{value:.4}"),
        ZeroCount::IdenticallyZero { max_abs } => format!("IdenticallyZero (max |F| {max_abs:.1e})"),
    }
}

fn anomaly_and_jacobi() -> Check {
    let data = entry("s2-v-double-tangent");
    let n = anomaly_index(&data).map_err(e2s)?;
    ensure(n == 1, || format!("anomaly {n}, expected 1"))?;
    let mut zero_kinds = 0;
    for kind in WITH_V {
        let reports = check_degree(&data, kind, 0, 32, 1e-8).map_err(e2s)?;
        for r in &reports {
            ensure(r.report.pass, || format!("{kind}: {}", r.report))?;
            zero_kinds += r.formal_zero as usize;
        }
    }
    let tau = Complex64::new(0.5, 1.2);
    let z = zero_count(&data, OperatorKind::DVStarDifference, tau, Cell::two_z(tau))?;
    let ok = match &z {
        ZeroCount::IdenticallyZero { .. } => true,
        c => c.rounded() == Some(4),
    };
    ensure(ok, || format!("zero count {}", describe(&z)))?;

    // Nonzero supplement: the family's degree-0 part has index n/2 = 2.
    let family = entry("s2-family-base");
    let nf = anomaly_index(&family).map_err(e2s)?;
    let r = check_degree(&family, OperatorKind::DVStarDifference, 0, 32, 1e-8).map_err(e2s)?;
    ensure(r[0].report.pass && !r[0].formal_zero, || format!("family D*: {}", r[0].report))?;
    let zf = zero_count(&family, OperatorKind::DVStarDifference, tau, Cell::two_z(tau))?;
    ensure(zf.rounded() == Some(4 * nf), || format!("family zero count {}", describe(&zf)))?;
    Ok(format!(
        "n = 1; 4 V operators pass at 32 samples ({zero_kinds} identically zero); (2Z)^2 count {}; \
         family supplement n = {nf}, D* passes, count {}",
        describe(&z),
        describe(&zf)
    ))
}

fn family_weight_shift() -> Check {
    let data = entry("s2-family-base");
    let n = anomaly_index(&data).map_err(e2s)?;
    let k = data.k as i64;
    let kind = OperatorKind::DVStarDifference;
    let r = check_degree(&data, kind, 2, 16, 1e-8).map_err(e2s)?;
    ensure(!r[0].formal_zero && r[0].report.pass, || format!("D* degree 2: {}", r[0].report))?;
    let shifted = r[0].report.spec.weight;
    let unshifted = JacobiFormSpec::designated(kind, n, data.k, data.l, 0);
    let control = check_degree_with(&data, kind, 2, unshifted, 16, 1e-8).map_err(e2s)?;
    ensure(!control[0].report.pass, || "degree 2 also passes with the degree-0 weight".into())?;
    for kind in [OperatorKind::DeltaVThetaPrime, OperatorKind::DVThetaQ, OperatorKind::DVThetaMinusQ] {
        let r = check_degree(&data, kind, 2, 16, 1e-8).map_err(e2s)?;
        ensure(r[0].report.spec.weight == k + 1 && r[0].report.pass, || format!("{kind}: {}", r[0].report))?;
    }
    Ok(format!(
        "D* degree 2 passes at weight {shifted} = (degree-0 weight) + 1, fails at {}; \
         Delta(V)-type operators pass at k+1 = {} (identically zero)",
        unshifted.weight,
        k + 1
    ))
}

fn cross_path_oracles() -> Check {
    let mut checked = 0;
    for e in catalog::all() {
        for data in [e.data.clone(), e.data.with_tangent_v()] {
            for kind in applicable(&data) {
                for comp in &data.components {
                    let r = oracle_expand_vs_closed(kind, kind.default_normalization(), comp, 16).map_err(e2s)?;
                    ensure(r.equal, || format!("{} {kind} {}: {r:?}", data.name, comp.name))?;
                    checked += 1;
                }
            }
        }
    }
    let mut shift = 0;
    for kind in [OperatorKind::DThetaQ, OperatorKind::DsThetaPrime, OperatorKind::WittenH] {
        let r = oracle_check_s2(kind, 16).map_err(e2s)?;
        ensure(r.equal, || format!("Borel-Weil {kind}: {r:?}"))?;
        shift = r.shift;
    }
    let r = oracle_check_s2(OperatorKind::DVStarDifference, 16).map_err(e2s)?;
    ensure(r.equal && r.nontrivial, || format!("Borel-Weil D*: {r:?}"))?;
    Ok(format!(
        "{checked} component integrands equal both ways through q^2; Borel-Weil agrees for D, Ds, H (shift {shift})"
    ))
}

fn integrality() -> Check {
    let mut count = 0;
    for e in catalog::all() {
        let integer_weights = e
            .data
            .components
            .iter()
            .all(|c| c.normals.iter().chain(&c.vbundles).all(|b| b.weight.is_integer()));
        if !integer_weights {
            continue;
        }
        for data in [e.data.clone(), e.data.with_tangent_v()] {
            for kind in applicable(&data) {
                let r = equivariant_character(&data, kind, kind.default_normalization(), 32).map_err(e2s)?;
                let v = rigidity_check(&r);
                if !v.is_rigid() {
                    continue;
                }
                // Constants are stored with the ledger factored out.
                ensure(constants_are_integers(&v), || format!("{} {kind}: {v:?} ledger {}", data.name, r.ledger))?;
                count += 1;
            }
        }
    }
    ensure(count > 0, || "no rigid results".into())?;
    Ok(format!("{count} rigid results on integer-weight entries, all constants integers through q^4"))
}

fn negative_controls() -> Check {
    let mut data = entry("cp3-weighted");
    data.components[0].normals[0].weight = -data.components[0].normals[0].weight;
    let r = equivariant_character(&data, OperatorKind::DsThetaPrime, Normalization::Raw, 16).map_err(e2s)?;
    let witness = match rigidity_check(&r) {
        RigidityVerdict::NotRigid { q8, monomial, coefficient } => format!("q^{q8}/8 [{monomial}] {coefficient}"),
        v => return Err(format!("corrupted cp3 still rigid: {v:?}")),
    };
    let mut data = entry("s2-rotation");
    data.components[0].normals[0].weight = HalfInt::ZERO;
    let report = validate(&data);
    ensure(report.errors.iter().any(|e| matches!(e, Error::ZeroWeightNormalBundle(_))), || {
        format!("zero weight accepted: {:?}", report.errors)
    })?;
    Ok(format!("flipped weight NotRigid (witness {witness}); zero weight rejected"))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 10] = [
        (1, "theta law suite", Duration::from_secs(5), theta_laws),
        (2, "nullwert expansions", Duration::from_secs(5), nullwerte),
        (3, "two-sphere vanishing", Duration::from_secs(10), two_sphere_vanishing),
        (4, "rigidity", Duration::from_secs(60), rigidity_without_v),
        (5, "rigidity with V", Duration::from_secs(60), rigidity_with_v),
        (6, "anomaly and Jacobi behavior", Duration::from_secs(120), anomaly_and_jacobi),
        (7, "family weight shift", Duration::from_secs(60), family_weight_shift),
        (8, "cross-path oracles", Duration::from_secs(120), cross_path_oracles),
        (9, "integrality", Duration::MAX, integrality),
        (10, "negative controls", Duration::MAX, negative_controls),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
