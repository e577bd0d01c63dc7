//! `genus`: equivariant elliptic-genus characters from fixed-point data.
//!
//! Exit codes: 0 ok, 2 parse/usage, 3 validation, 4 computation.
//! Reports go to stdout, diagnostics to stderr.

// A closed stdout (e.g. `| head`) ends the run quietly instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genus_core::catalog;
use genus_core::dataset::{
    complex_json, genus_result_json, jacobi_json, parse_dataset, q_exponent, rigidity_json, to_json_pretty,
    wrational_json, zero_count_json, FORMAT,
};
use genus_core::genera::{Normalization, OperatorKind};
use genus_core::jacobi::{
    check_degree, count_zeros, rigidity_verdict_from_index, Cell, ComponentFunction, ZeroCount, IDENTICALLY_ZERO_FLOOR,
};
use genus_core::localization::{
    anomaly_index, base_monomials, equivariant_character, rigidity_check, validate, ActionData, RigidityVerdict,
};
use genus_core::theta::{theta_formal, theta_numeric, ThetaKind};
use genus_core::algebra::HalfInt;
use genus_core::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "genus", version, about = "Equivariant Chern characters of elliptic-genus index bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of an operator's equivariant character.
    Expand {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        operator: OperatorKind,
        /// Truncation order in eighths of a q power.
        #[arg(long, default_value_t = 48, value_parser = clap::value_parser!(i64).range(0..=256))]
        order: i64,
        /// raw or v; defaults to the operator's Jacobi normalization.
        #[arg(long)]
        normalization: Option<Normalization>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rigidity verdicts with constants or the first witness.
    Rigidity {
        #[command(flatten)]
        source: Source,
        /// An operator name, or `all`.
        #[arg(long, default_value = "all")]
        operator: String,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(i64).range(0..=256))]
        order: i64,
        /// Replace the dataset's V bundle by the tangent bundle.
        #[arg(long)]
        v_tangent: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the Jacobi transformation laws of the degree-2p components.
    Jacobi {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        operator: OperatorKind,
        #[arg(long, default_value_t = 0)]
        degree: u32,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count zeros of the degree-0 component over a period cell.
    Zeros {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        operator: OperatorKind,
        #[arg(long, default_value = "0.5+1.2i", value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, value_enum, default_value_t = CellKind::TwoZ)]
        cell: CellKind,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a theta function numerically and from its q-series.
    Theta {
        #[arg(long)]
        kind: ThetaKind,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        t: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
        /// Order of the formal series used for the cross-check.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(i64).range(1..=256))]
        order: i64,
        /// Also print the coefficients of theta(m t, tau) for this m.
        #[arg(long)]
        series: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Built-in datasets.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print an entry as a dataset document.
    Emit { name: String },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Dataset document (JSON, `format: 1`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// A built-in catalog entry.
    #[arg(long)]
    entry: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CellKind {
    /// `2Z tau + 2Z`.
    TwoZ,
    /// `Z tau + Z`.
    Unit,
}

struct Failure {
    code: u8,
    message: String,
}

type Outcome<T> = std::result::Result<T, Failure>;

fn fail(code: u8, e: impl std::fmt::Display) -> Failure {
    Failure { code, message: e.to_string() }
}

/// Exit code for an error raised after the dataset validated.
fn computation_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::UnknownEntry(_) => 2,
        Error::InvalidData(_)
        | Error::ZeroWeightNormalBundle(_)
        | Error::MissingVBundle(_)
        | Error::UnsupportedNormalization { .. }
        | Error::InconsistentAnomaly(_)
        | Error::SpinInconsistent(_)
        | Error::DegreeOutOfRange { .. }
        | Error::MissingTableEntry(_)
        | Error::NonNilpotentInput => 3,
        _ => 4,
    }
}

fn compute<T>(r: genus_core::Result<T>) -> Outcome<T> {
    r.map_err(|e| fail(computation_code(&e), e))
}

/// `0.3`, `1.2i`, `i`, `0.5+1.2i`, `-0.1-2i`.
fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{s}` is not a complex number like 0.5+1.2i");
    let num = |x: &str| -> std::result::Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    if let Some(body) = t.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        match split {
            Some(k) => Ok(Complex64::new(body[..k].parse().map_err(|_| bad())?, num(&body[k..])?)),
            None => Ok(Complex64::new(0.0, num(body)?)),
        }
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}

fn load(source: &Source) -> Outcome<ActionData> {
    let data = match (&source.input, &source.entry) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
            parse_dataset(&text, stem).map_err(|e| fail(2, format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => catalog::builtin(name).map_err(|e| fail(2, e))?.data,
        (None, None) => return Err(fail(2, "one of --input or --entry is required")),
    };
    let report = validate(&data);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    report.into_result().map_err(|e| fail(3, format!("validation: {e}")))?;
    Ok(data)
}

fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_expand(source: &Source, kind: OperatorKind, order: i64, norm: Option<Normalization>, format: Format) -> Outcome<()> {
    let data = load(source)?;
    let norm = norm.unwrap_or_else(|| kind.default_normalization());
    let r = compute(equivariant_character(&data, kind, norm, order))?;
    if format == Format::Json {
        print_json(&genus_result_json(&r, &data.name));
        return Ok(());
    }
    let j = genus_result_json(&r, &data.name);
    out!(
        "dataset {}  operator {}  normalization {}  order {}",
        data.name,
        kind,
        norm,
        q_exponent(order)
    );
    out!("prefactor w^({}/2) * {}", r.w_half, r.ledger);
    for comp in j["components"].as_array().into_iter().flatten() {
        out!("[{}]", comp["monomial"].as_str().unwrap_or("?"));
        for c in comp["coefficients"].as_array().into_iter().flatten() {
            out!("  q^{}: {}", c["q"].as_str().unwrap_or("?"), c["value"]["text"].as_str().unwrap_or("?"));
        }
    }
    Ok(())
}

fn verdict_text(v: &RigidityVerdict) -> String {
    match v {
        RigidityVerdict::Rigid { constants } => {
            let cs: Vec<String> = constants
                .iter()
                .map(|c| format!("q^{}[{}]={}", q_exponent(c.q8), c.monomial, c.value))
                .collect();
            if cs.is_empty() {
                "rigid (all coefficients zero)".to_string()
            } else {
                format!("rigid {}", cs.join(" "))
            }
        }
        RigidityVerdict::NotRigid { q8, monomial, coefficient } => {
            format!("NOT rigid: witness q^{}[{monomial}] = {coefficient}", q_exponent(*q8))
        }
    }
}

fn cmd_rigidity(source: &Source, operator: &str, order: i64, v_tangent: bool, format: Format) -> Outcome<()> {
    let mut data = load(source)?;
    if v_tangent {
        data = data.with_tangent_v();
    }
    let kinds: Vec<OperatorKind> = if operator == "all" {
        OperatorKind::ALL
            .into_iter()
            .filter(|k| !k.uses_v() || data.has_v())
            .collect()
    } else {
        vec![operator.parse().map_err(|e| fail(2, e))?]
    };
    let anomaly = anomaly_index(&data);
    let mut rows = Vec::new();
    for kind in kinds {
        let r = compute(equivariant_character(&data, kind, kind.default_normalization(), order))?;
        let v = rigidity_check(&r);
        let class = anomaly.as_ref().ok().map(|n| rigidity_verdict_from_index(*n, &r));
        rows.push((kind, v, class));
    }
    if format == Format::Json {
        let out = json!({
            "format": FORMAT,
            "dataset": data.name,
            "order": q_exponent(order),
            "anomaly": anomaly.as_ref().ok(),
            "anomaly_error": anomaly.as_ref().err().map(|e| e.to_string()),
            "operators": rows.iter().map(|(k, v, c)| {
                let mut o = rigidity_json(v);
                o["operator"] = json!(k.name());
                if let Some(c) = c {
                    o["index_class"] = json!(format!("{:?}", c.class));
                    o["exactly_zero"] = json!(c.exactly_zero);
                    o["contradiction"] = json!(c.contradiction);
                }
                o
            }).collect::<Vec<_>>(),
        });
        print_json(&out);
        return Ok(());
    }
    match &anomaly {
        Ok(n) => out!("dataset {}  anomaly n = {n}  order {}", data.name, q_exponent(order)),
        Err(e) => out!("dataset {}  anomaly: {e}  order {}", data.name, q_exponent(order)),
    }
    for (k, v, c) in &rows {
        let class = c.as_ref().map(|c| format!("  [{:?}]", c.class)).unwrap_or_default();
        out!("{:<22} {}{class}", k.name(), verdict_text(v));
    }
    Ok(())
}

fn cmd_jacobi(
    source: &Source,
    kind: OperatorKind,
    degree: u32,
    samples: usize,
    tol: f64,
    format: Format,
) -> Outcome<()> {
    let data = load(source)?;
    let reports = compute(check_degree(&data, kind, degree, samples, tol))?;
    if format == Format::Json {
        print_json(&json!({
            "format": FORMAT,
            "dataset": data.name,
            "operator": kind.name(),
            "degree": degree,
            "components": jacobi_json(&reports, &data.base),
        }));
        return Ok(());
    }
    for r in &reports {
        let zero = if r.formal_zero { "  (formally zero)" } else { "" };
        out!("[{}] {}{zero}", data.base.format_monomial(&r.monomial), r.report);
    }
    Ok(())
}

fn cmd_zeros(source: &Source, kind: OperatorKind, tau: Complex64, cell: CellKind, format: Format) -> Outcome<()> {
    let data = load(source)?;
    if !(tau.im > 0.0) {
        return Err(fail(3, "tau must have positive imaginary part"));
    }
    let monomial = base_monomials(&data.base).remove(0);
    let func = compute(ComponentFunction::new(&data, kind, kind.default_normalization(), &monomial, 1e-14))?;
    let f = |t| func.eval(t, tau);
    let c = match cell {
        CellKind::TwoZ => Cell::two_z(tau),
        CellKind::Unit => Cell::unit(tau),
    };
    let n = compute(count_zeros(&f, tau, c, IDENTICALLY_ZERO_FLOOR))?;
    if format == Format::Json {
        let mut o = zero_count_json(&n);
        o["format"] = json!(FORMAT);
        o["dataset"] = json!(data.name);
        o["operator"] = json!(kind.name());
        o["tau"] = complex_json(tau);
        print_json(&o);
        return Ok(());
    }
    match n {
        ZeroCount::Count { value, perturbations, panels } => out!(
            "zeros {value:.6} (nearest integer {}) panels={panels} perturbations={perturbations}",
            n.rounded().map(|k| k.to_string()).unwrap_or_else(|| "none within 0.2".into())
        ),
        ZeroCount::IdenticallyZero { max_abs } => out!("IdenticallyZero (max |F| = {max_abs:.3e})"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_theta(
    kind: ThetaKind,
    t: Complex64,
    tau: Complex64,
    eps: f64,
    order: i64,
    series: Option<&str>,
    format: Format,
) -> Outcome<()> {
    let numeric = compute(theta_numeric(kind, t, tau, eps))?;
    let formal = theta_formal(kind, HalfInt::from_int(1), order).eval(t, tau);
    let rel = (numeric - formal).norm() / numeric.norm().max(1.0);
    let expansion = match series {
        Some(m) => Some(theta_formal(kind, HalfInt::parse(m).map_err(|e| fail(2, e))?, order)),
        None => None,
    };
    if format == Format::Json {
        let mut o = json!({
            "format": FORMAT,
            "kind": kind.name(),
            "t": complex_json(t),
            "tau": complex_json(tau),
            "numeric": complex_json(numeric),
            "formal": complex_json(formal),
            "formal_order": q_exponent(order),
            "relative_difference": rel,
        });
        if let Some(x) = &expansion {
            o["series"] = json!({
                "m": x.m.to_string(),
                "w_half": x.w_half,
                "ledger": x.ledger.to_string(),
                "coefficients": x.series.terms()
                    .map(|(e, c)| json!({"q": q_exponent(e), "value": wrational_json(c)}))
                    .collect::<Vec<_>>(),
            });
        }
        print_json(&o);
        return Ok(());
    }
    out!("{kind}(t, tau) at t = {t}, tau = {tau}");
    out!("  numeric  {numeric:.15e}");
    out!("  formal   {formal:.15e}  (order {})", q_exponent(order));
    out!("  relative difference {rel:.3e}");
    if let Some(x) = expansion {
        out!("{kind}({} t, tau) = w^({}/2) * {} * (", x.m, x.w_half, x.ledger);
        for (e, c) in x.series.terms() {
            out!("  q^{}: {c}", q_exponent(e));
        }
        out!(")");
    }
    Ok(())
}

fn cmd_catalog(action: &CatalogAction) -> Outcome<()> {
    match action {
        CatalogAction::List { format } => {
            let entries = catalog::all();
            if *format == Format::Json {
                print_json(&Value::Array(
                    entries
                        .iter()
                        .map(|e| {
                            json!({
                                "name": e.name,
                                "fiber_half_dim": e.data.k,
                                "v_half_rank": e.data.l,
                                "doc": e.doc,
                                "expected": e.expected.iter()
                                    .map(|(k, x)| json!({"operator": k.name(), "expect": x.to_string()}))
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect(),
                ));
            } else {
                for e in entries {
                    out!("{:<22} {}", e.name, e.doc);
                }
            }
        }
        CatalogAction::Emit { name } => {
            let e = catalog::builtin(name).map_err(|e| fail(2, e))?;
            out!("{}", to_json_pretty(&e.data).map_err(|e| fail(4, e))?);
        }
    }
    Ok(())
}

fn configure_threads() -> Outcome<()> {
    let Ok(v) = std::env::var("GENUS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| fail(2, format!("GENUS_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| fail(4, e))
}

fn run(cli: Cli) -> Outcome<()> {
    configure_threads()?;
    match &cli.command {
        Command::Expand { source, operator, order, normalization, format } => {
            cmd_expand(source, *operator, *order, *normalization, *format)
        }
        Command::Rigidity { source, operator, order, v_tangent, format } => {
            cmd_rigidity(source, operator, *order, *v_tangent, *format)
        }
        Command::Jacobi { source, operator, degree, samples, tol, format } => {
            cmd_jacobi(source, *operator, *degree, *samples, *tol, *format)
        }
        Command::Zeros { source, operator, tau, cell, format } => cmd_zeros(source, *operator, *tau, *cell, *format),
        Command::Theta { kind, t, tau, eps, order, series, format } => {
            cmd_theta(*kind, *t, *tau, *eps, *order, series.as_deref(), *format)
        }
        Command::Catalog { action } => cmd_catalog(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |s| parse_complex(s).unwrap();
        assert_eq!(c("0.3"), Complex64::new(0.3, 0.0));
        assert_eq!(c("1.0i"), Complex64::new(0.0, 1.0));
        assert_eq!(c("i"), Complex64::new(0.0, 1.0));
        assert_eq!(c("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(c("0.5+1.2i"), Complex64::new(0.5, 1.2));
        assert_eq!(c("-0.1 - 2i"), Complex64::new(-0.1, -2.0));
        assert_eq!(c("1e-3+1e-2i"), Complex64::new(1e-3, 1e-2));
        assert!(parse_complex("x").is_err());
    }
}
