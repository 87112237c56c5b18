//! Subcommand implementations. Each returns the process exit status.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};

use eea_core::audit::{run_family_audit, run_tensor_audit};
use eea_core::expansion::{EeaCertificate, SpectralBounds};
use eea_core::field::parse_rational;
use eea_core::graph::digraph;
use eea_core::markov::{is_doubly_stochastic, is_markov, mixing_report};
use eea_core::spectral::{perron_data, ramanujan_from_spectrum, symmetric_eigenvalues};
use eea_core::structure::{cover_time, default_k_max, hierarchy_report, is_simple, is_simple_complete};
use eea_core::{
    cheeger_exact, is_h_eea, run_full_audit, AuditOptions, AuditReport, Error, EvolutionAlgebra, FieldDescriptor,
    RealMatrix, ResourceCaps, SupportMode,
};
use serde_json::{json, Map, Value};

use crate::family::{self, Params, Provenance, Weights};
use crate::{CommonArgs, Format, EXIT_FALSE};

/// Largest dimension for which `analyze` runs the exact hierarchy.
const HIERARCHY_LIMIT: usize = 64;
/// Largest dimension for exact rank and simplicity tests in `analyze`.
const EXACT_RANK_LIMIT: usize = 256;
/// Longest window `analyze` uses for the exact hierarchy by default.
const HIERARCHY_WINDOW: usize = 12;
/// Default mixing window.
const MIX_STEPS: usize = 60;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T = u8> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::InvalidArgument(msg.into()))
}

/// Input algebra with a label for reports.
struct Loaded {
    algebra: EvolutionAlgebra,
    label: String,
    provenance: Option<Provenance>,
    factors: Option<(EvolutionAlgebra, EvolutionAlgebra)>,
}

fn params(args: &CommonArgs) -> Params {
    Params {
        n: args.n,
        d: args.d,
        p: args.p,
        q: args.q,
        seed: args.seed,
    }
}

fn weights(args: &CommonArgs) -> Weights {
    Weights {
        walk: args.walk,
        loops: args.loops,
    }
}

fn load(args: &CommonArgs, caps: &ResourceCaps) -> CliResult<Loaded> {
    if let Some(path) = &args.input {
        let text = fs::read_to_string(path)?;
        let algebra = EvolutionAlgebra::from_json_str(&text)?;
        let field = algebra.field();
        let algebra = family::apply_weights(algebra, weights(args), field)?;
        return Ok(Loaded {
            algebra,
            label: path.display().to_string(),
            provenance: None,
            factors: None,
        });
    }
    let built = family::build(&args.source, &params(args), weights(args), args.field, caps)?;
    Ok(Loaded {
        label: built.provenance.descriptor.clone(),
        algebra: built.algebra,
        provenance: Some(built.provenance),
        factors: built.factors,
    })
}

fn emit(args: &CommonArgs, text: &str) -> CliResult<()> {
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn format_of(args: &CommonArgs, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let format = args.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(usage(format!("format {format:?} is not available for this command").to_lowercase()))
    }
}

/// `key: value` lines for the scalar leaves of a JSON object.
fn flatten(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(v, &key, out);
            }
        }
        Value::Array(items) if items.len() > 16 => {
            let head: Vec<String> = items.iter().take(8).map(Value::to_string).collect();
            let _ = writeln!(out, "{prefix}: [{}, ... ({} entries)]", head.join(", "), items.len());
        }
        other => {
            let _ = writeln!(out, "{prefix}: {other}");
        }
    }
}

pub fn gen(args: &CommonArgs) -> CliResult {
    let caps = args.caps()?;
    let loaded = load(args, &caps)?;
    let text = match format_of(args, Format::Json, &[Format::Json, Format::Dot])? {
        Format::Dot => {
            let name = loaded.label.replace(|c: char| !c.is_ascii_alphanumeric(), "_");
            if loaded.algebra.is_symmetric() {
                eea_core::underlying_graph(&loaded.algebra).to_dot(&name)
            } else {
                digraph(&loaded.algebra).to_dot(&name)
            }
        }
        _ => {
            let mut value = to_value(&loaded.algebra.to_json());
            if let (Value::Object(map), Some(p)) = (&mut value, &loaded.provenance) {
                map.insert("provenance".into(), to_value(p));
            }
            pretty(&value)
        }
    };
    emit(args, &text)?;
    Ok(0)
}

pub fn analyze(args: &CommonArgs) -> CliResult {
    let caps = args.caps()?;
    let format = format_of(args, Format::Json, &[Format::Json, Format::Table])?;
    let loaded = load(args, &caps)?;
    let report = analysis(&loaded, args, &caps)?;
    let text = match format {
        Format::Table => {
            let mut out = String::new();
            flatten(&report, "", &mut out);
            out
        }
        _ => pretty(&report),
    };
    emit(args, &text)?;
    Ok(0)
}

fn analysis(loaded: &Loaded, args: &CommonArgs, caps: &ResourceCaps) -> CliResult<Value> {
    let algebra = &loaded.algebra;
    let n = algebra.dim();
    let graph = eea_core::underlying_graph(algebra);
    let regular = graph.is_regular();
    let mut degradations: Vec<String> = Vec::new();
    let mut out = Map::new();
    out.insert("input".into(), json!(loaded.label));
    out.insert(
        "algebra".into(),
        json!({
            "field": algebra.field(),
            "n": n,
            "nonzeros": algebra.nonzeros().count(),
            "symmetric": algebra.is_symmetric(),
            "graphicable": algebra.is_graphicable(),
            "nonsingular": (n <= EXACT_RANK_LIMIT).then(|| algebra.is_nonsingular()),
            "markov": is_markov(algebra).unwrap_or(false),
            "doubly_stochastic": is_doubly_stochastic(algebra).unwrap_or(false),
        }),
    );
    out.insert(
        "graph".into(),
        json!({
            "vertices": graph.n(),
            "edges": graph.edge_count(),
            "min_degree": graph.min_degree(),
            "max_degree": graph.max_degree(),
            "regular": regular,
            "connected": graph.is_connected(),
            "components": graph.connected_components().len(),
            "diameter": graph.diameter(),
        }),
    );

    let spectrum = symmetric_eigenvalues(&RealMatrix::adjacency(&graph))?;
    let cheeger = match cheeger_exact(&graph, caps) {
        Ok(cert) => to_value(&cert),
        Err(cap @ Error::EnumerationCapExceeded { .. }) => {
            degradations.push(format!("exact Cheeger constant skipped: {cap}"));
            match (regular, spectrum.lambda2()) {
                (Some(d), Some(lambda2)) => {
                    // Same sandwich as the library fallback, reusing the spectrum.
                    let gap = (d as f64 - lambda2).max(0.0);
                    let bounds = SpectralBounds {
                        lower: gap / 2.0,
                        upper: (2.0 * d as f64 * gap).sqrt(),
                        d,
                        lambda2,
                    };
                    json!({ "method": "spectral-bounds-only", "bounds": bounds })
                }
                _ => {
                    degradations.push("no spectral bounds: graph is not regular".into());
                    json!({ "method": "unavailable" })
                }
            }
        }
        Err(e) => return Err(e.into()),
    };
    out.insert("cheeger".into(), cheeger);

    if spectrum.partial {
        degradations.push(format!("partial spectrum: n = {n} exceeds the full eigensolver limit"));
    }
    let mut s = Map::new();
    s.insert("eigenvalues".into(), json!(spectrum.eigenvalues));
    s.insert("partial".into(), json!(spectrum.partial));
    s.insert("residual".into(), json!(spectrum.residual_bound));
    s.insert("gap".into(), json!(spectrum.spectral_gap().ok()));
    if let Some(d) = regular {
        s.insert("perron".into(), to_value(&perron_data(&spectrum, d)));
        match ramanujan_from_spectrum(&spectrum, d) {
            Ok(v) => {
                s.insert("ramanujan".into(), to_value(&v));
            }
            Err(e) => degradations.push(format!("Ramanujan verdict unavailable: {e}")),
        }
    }
    out.insert("spectrum".into(), Value::Object(s));

    if n <= EXACT_RANK_LIMIT {
        out.insert(
            "simplicity".into(),
            json!({
                "verdict": is_simple(algebra),
                "complete_test": is_simple_complete(algebra),
            }),
        );
    } else {
        degradations.push(format!("exact rank and simplicity skipped: n = {n} > {EXACT_RANK_LIMIT}"));
    }

    if algebra.field() == FieldDescriptor::Real {
        degradations.push("exact hierarchy skipped over the reals".into());
    } else if n > HIERARCHY_LIMIT {
        degradations.push(format!("exact hierarchy skipped: n = {n} > {HIERARCHY_LIMIT}"));
    } else {
        let k_max = args
            .kmax
            .unwrap_or_else(|| default_k_max(algebra, caps).min(HIERARCHY_WINDOW))
            .max(2);
        match hierarchy_report(algebra, k_max, caps) {
            Ok(h) => {
                out.insert(
                    "hierarchy".into(),
                    json!({
                        "k_max": h.k_max,
                        "trivial": h.trivial,
                        "persistent": h.persistent,
                        "transient": h.transient,
                    }),
                );
            }
            Err(e @ Error::CoefficientCapExceeded { .. }) => {
                degradations.push(format!("exact hierarchy stopped: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut covers = Vec::with_capacity(n);
    for i in 0..n {
        covers.push(cover_time(algebra, i, SupportMode::Combinatorial, n, caps)?);
    }
    let all = covers.iter().all(Option::is_some);
    out.insert(
        "cover_times".into(),
        json!({
            "mode": SupportMode::Combinatorial,
            "per_generator": covers,
            "max": if all { covers.iter().flatten().max().copied() } else { None },
        }),
    );
    out.insert("degradations".into(), json!(degradations));
    Ok(Value::Object(out))
}

pub fn certify(args: &CommonArgs) -> CliResult {
    let caps = args.caps()?;
    let format = format_of(args, Format::Json, &[Format::Json, Format::Table])?;
    let h_text = args.h.as_deref().ok_or_else(|| usage("certify needs --h"))?;
    let h = parse_rational(h_text)?;
    let loaded = load(args, &caps)?;
    let cert = is_h_eea(&loaded.algebra, &h, &caps)?;
    let text = match format {
        Format::Table => certificate_table(&loaded.label, &cert),
        _ => pretty(&to_value(&cert)),
    };
    emit(args, &text)?;
    Ok(if cert.holds { 0 } else { EXIT_FALSE })
}

fn certificate_table(label: &str, cert: &EeaCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input: {label}");
    let _ = writeln!(out, "threshold: {}", cert.threshold);
    let _ = writeln!(out, "holds: {}", if cert.holds { "yes" } else { "no" });
    if let Some(c) = &cert.cheeger {
        let _ = writeln!(out, "h: {}", c.value);
        let _ = writeln!(out, "witness: {:?}", c.witness);
    }
    if let Some(b) = &cert.bounds {
        let _ = writeln!(out, "bounds: [{}, {}] (d = {}, lambda2 = {})", b.lower, b.upper, b.d, b.lambda2);
    }
    out
}

pub fn mix(args: &CommonArgs) -> CliResult {
    let caps = args.caps()?;
    let format = format_of(args, Format::Csv, &[Format::Csv, Format::Json])?;
    let loaded = load(args, &caps)?;
    let k_max = args.kmax.unwrap_or(MIX_STEPS);
    let report = mixing_report(&loaded.algebra, args.start, k_max, args.eps, &caps)?;
    let text = match format {
        Format::Json => {
            let mut value = to_value(&report);
            if let Value::Object(map) = &mut value {
                map.insert("periodic".into(), json!(report.periodic()));
                map.insert("first_paper_violation".into(), json!(report.first_paper_violation()));
            }
            pretty(&value)
        }
        _ => report.to_csv(),
    };
    emit(args, &text)?;
    let tmix = report
        .empirical_tmix
        .map_or_else(|| format!("not reached within {k_max} steps"), |k| k.to_string());
    eprintln!("t_mix(eps = {}): {tmix}; periodic: {}", report.epsilon, report.periodic());
    Ok(0)
}

pub fn audit(args: &CommonArgs) -> CliResult {
    let caps = args.caps()?;
    let format = format_of(args, Format::Json, &[Format::Json, Format::Table, Format::Csv])?;
    let options = AuditOptions {
        caps,
        log_base: args.log_base(),
    };
    let report = match args.sweep {
        Some(count) => sweep_audit(args, count, &options)?,
        None => {
            let loaded = load(args, &caps)?;
            match &loaded.factors {
                Some((a, b)) => run_tensor_audit(a, b, &loaded.label, &options)?,
                None => run_full_audit(&loaded.algebra, &loaded.label, &options),
            }
        }
    };
    let text = match format {
        Format::Table => report.to_table(),
        Format::Csv => report.findings_csv(),
        _ => pretty(&to_value(&report)),
    };
    emit(args, &text)?;
    Ok(if report.assertable_failures > 0 { EXIT_FALSE } else { 0 })
}

/// Audits seeds `seed..seed+count` of a seeded family as one sample.
fn sweep_audit(args: &CommonArgs, count: u64, options: &AuditOptions) -> CliResult<AuditReport> {
    if args.input.is_some() {
        return Err(usage("--sweep needs a family, not --input"));
    }
    if count < 2 {
        return Err(usage("--sweep needs at least two seeds"));
    }
    let start = args.seed.unwrap_or(0);
    let mut members = Vec::new();
    for seed in start..start.saturating_add(count) {
        let params = Params {
            seed: Some(seed),
            ..params(args)
        };
        let built = family::build(&args.source, &params, weights(args), args.field, &options.caps)?;
        if built.provenance.seed.is_none() {
            return Err(usage("--sweep needs a seeded family such as random-regular"));
        }
        members.push((built.provenance.descriptor.clone(), built.algebra));
    }
    let label = format!("{} seeds {start}..{}", args.source.join(" "), start + count);
    Ok(run_family_audit(&members, &label, options))
}
