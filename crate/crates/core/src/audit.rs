//! Audit harness: evaluates quantitative claims about expander evolution
//! algebras on concrete inputs.
//!
//! Every check is oriented as `lhs <= rhs` (or `lhs == rhs`) and carries its
//! signed margin `rhs - lhs`. Assertable checks encode facts that must hold;
//! report-only checks evaluate statements that admit small counterexamples
//! and are recorded as findings, never as failures.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Element, EvolutionAlgebra};
use crate::caps::ResourceCaps;
use crate::constructions::{kronecker_product, FiniteGroup, GeneratingSet};
use crate::error::{Error, Result};
use crate::expansion::{cheeger_exact, CheegerCertificate, CheegerValue};
use crate::field::{format_rational, Scalar};
use crate::graph::{underlying_graph, SimpleGraph};
use crate::markov::{
    corrected_mixing_bound, is_doubly_stochastic, mixing_simulation, paper_mixing_bound,
    second_largest_modulus, tmix_bound,
};
use crate::spectral::{
    perron_data, ramanujan_expansion_lower, ramanujan_from_spectrum, symmetric_eigenvalues,
    RealMatrix, Spectrum,
};
use crate::structure::{
    default_k_max, is_nested, is_simple_complete, persistency_from_trace, support_trace,
    SupportMode,
};

/// Relative slack used when comparing floating quantities.
pub const AUDIT_TOLERANCE: f64 = 1e-9;
/// Largest dimension for per-generator exact-support checks.
pub const EXACT_SUPPORT_LIMIT: usize = 256;
/// Largest dimension for the plenary-power identity check.
pub const IDENTITY_CHECK_LIMIT: usize = 64;
/// Steps simulated by the mixing checks.
pub const MIXING_STEPS: usize = 60;
/// Threshold for the empirical mixing time.
pub const MIXING_EPSILON: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Assertable,
    ReportOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "==")]
    Eq,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub id: String,
    pub input: String,
    pub kind: CheckKind,
    pub relation: Relation,
    pub hypotheses_met: bool,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_exact: Option<String>,
    pub holds: bool,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn within_tolerance(lhs: f64, rhs: f64) -> f64 {
    AUDIT_TOLERANCE * 1f64.max(lhs.abs()).max(rhs.abs())
}

impl TheoremCheck {
    /// `lhs <= rhs` up to the relative audit tolerance.
    pub fn le(id: &str, input: &str, kind: CheckKind, lhs: f64, rhs: f64) -> Self {
        TheoremCheck {
            id: id.to_string(),
            input: input.to_string(),
            kind,
            relation: Relation::Le,
            hypotheses_met: true,
            lhs,
            rhs,
            lhs_exact: None,
            rhs_exact: None,
            holds: lhs <= rhs + within_tolerance(lhs, rhs),
            margin: rhs - lhs,
            witness: None,
            note: None,
        }
    }

    /// `lhs <= rhs` decided exactly.
    pub fn le_exact(id: &str, input: &str, kind: CheckKind, lhs: &BigRational, rhs: &BigRational) -> Self {
        let (l, r) = (to_f64(lhs), to_f64(rhs));
        let mut check = TheoremCheck::le(id, input, kind, l, r);
        check.holds = lhs <= rhs;
        check.margin = to_f64(&(rhs - lhs));
        check.lhs_exact = Some(format_rational(lhs));
        check.rhs_exact = Some(format_rational(rhs));
        check
    }

    /// `lhs == rhs` for counts and truth values.
    pub fn eq(id: &str, input: &str, kind: CheckKind, lhs: f64, rhs: f64) -> Self {
        let mut check = TheoremCheck::le(id, input, kind, lhs, rhs);
        check.relation = Relation::Eq;
        check.holds = lhs == rhs;
        check
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_assertable_failure(&self) -> bool {
        self.kind == CheckKind::Assertable && !self.holds
    }

    pub fn is_finding(&self) -> bool {
        self.kind == CheckKind::ReportOnly && !self.holds
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn bool_value(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedCheck {
    pub id: String,
    pub input: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub input: String,
    pub checks: Vec<TheoremCheck>,
    pub skipped: Vec<SkippedCheck>,
    pub assertable_failures: usize,
    pub report_findings: usize,
}

impl AuditReport {
    fn new(input: &str) -> Self {
        AuditReport {
            input: input.to_string(),
            checks: Vec::new(),
            skipped: Vec::new(),
            assertable_failures: 0,
            report_findings: 0,
        }
    }

    fn push(&mut self, check: TheoremCheck) {
        self.checks.push(check);
    }

    fn skip(&mut self, id: &str, input: &str, reason: impl Into<String>) {
        self.skipped.push(SkippedCheck {
            id: id.to_string(),
            input: input.to_string(),
            reason: reason.into(),
        });
    }

    /// Sorts by check id then input and recounts.
    fn finish(mut self) -> Self {
        self.checks
            .sort_by(|a, b| (a.id.as_str(), a.input.as_str()).cmp(&(b.id.as_str(), b.input.as_str())));
        self.skipped
            .sort_by(|a, b| (a.id.as_str(), a.input.as_str()).cmp(&(b.id.as_str(), b.input.as_str())));
        self.assertable_failures = self.checks.iter().filter(|c| c.is_assertable_failure()).count();
        self.report_findings = self.checks.iter().filter(|c| c.is_finding()).count();
        self
    }

    fn merge(&mut self, other: AuditReport) {
        self.checks.extend(other.checks);
        self.skipped.extend(other.skipped);
    }

    pub fn find(&self, id: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn findings(&self) -> impl Iterator<Item = &TheoremCheck> {
        self.checks.iter().filter(|c| c.is_finding())
    }

    /// Fixed-width table, one row per check.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<36} {:<16} {:<11} {:>14} {:>3} {:>14} {:>6}",
            "check", "input", "kind", "lhs", "", "rhs", "holds"
        );
        for c in &self.checks {
            let kind = match c.kind {
                CheckKind::Assertable => "assert",
                CheckKind::ReportOnly => "report",
            };
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "==",
            };
            let _ = writeln!(
                out,
                "{:<36} {:<16} {:<11} {:>14.6} {:>3} {:>14.6} {:>6}",
                c.id,
                truncate(&c.input, 16),
                kind,
                c.lhs,
                rel,
                c.rhs,
                if c.holds { "yes" } else { "NO" }
            );
        }
        let _ = writeln!(
            out,
            "assertable failures: {}, report findings: {}, skipped: {}",
            self.assertable_failures,
            self.report_findings,
            self.skipped.len()
        );
        out
    }

    /// CSV of the report-only findings.
    pub fn findings_csv(&self) -> String {
        let mut out = String::from("check,input,lhs,rhs,margin\n");
        for c in self.findings() {
            let _ = writeln!(out, "{},{},{},{},{}", c.id, c.input, c.lhs, c.rhs, c.margin);
        }
        out
    }
}

fn truncate(s: &str, width: usize) -> String {
    if s.chars().count() <= width {
        s.to_string()
    } else {
        s.chars().take(width - 1).chain(std::iter::once('~')).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditOptions {
    pub caps: ResourceCaps,
    pub log_base: LogBase,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            caps: ResourceCaps::default(),
            log_base: LogBase::Natural,
        }
    }
}

/// Shared facts about one algebra.
struct Context<'a> {
    algebra: &'a EvolutionAlgebra,
    input: &'a str,
    options: AuditOptions,
    graph: SimpleGraph,
    n: usize,
    d: usize,
    regular: Option<usize>,
    connected: bool,
    symmetric: bool,
    cheeger: Option<CheegerCertificate>,
    structural: std::result::Result<Spectrum, String>,
    adjacency: std::result::Result<Spectrum, String>,
}

impl<'a> Context<'a> {
    fn new(algebra: &'a EvolutionAlgebra, input: &'a str, options: AuditOptions) -> Self {
        let graph = underlying_graph(algebra);
        let n = graph.n();
        let symmetric = algebra.is_symmetric();
        let cheeger = cheeger_exact(&graph, &options.caps).ok();
        let structural = if !symmetric {
            Err("structural matrix is not symmetric".to_string())
        } else if n < 2 {
            Err("needs n >= 2".to_string())
        } else {
            RealMatrix::from_algebra(algebra)
                .and_then(|m| symmetric_eigenvalues(&m))
                .map_err(|e| e.to_string())
        };
        let regular = graph.is_regular();
        let adjacency = if regular.is_none() {
            Err("graph is not regular".to_string())
        } else if n < 2 {
            Err("needs n >= 2".to_string())
        } else {
            symmetric_eigenvalues(&RealMatrix::adjacency(&graph)).map_err(|e| e.to_string())
        };
        Context {
            algebra,
            input,
            options,
            n,
            d: graph.max_degree(),
            regular,
            connected: graph.is_connected(),
            symmetric,
            cheeger,
            structural,
            adjacency,
            graph,
        }
    }

    fn h(&self) -> Option<&BigRational> {
        self.cheeger.as_ref().and_then(|c| c.value.as_rational())
    }

    /// Exact `h > 0` with the connected/`n >= 2` hypotheses.
    fn positive_h(&self) -> std::result::Result<&BigRational, String> {
        if self.n < 2 {
            return Err("needs n >= 2".into());
        }
        if !self.connected {
            return Err("graph is disconnected".into());
        }
        self.h().ok_or_else(|| "exact Cheeger constant unavailable (enumeration cap)".into())
    }

    /// Common weight `c` of a symmetric zero-diagonal algebra whose nonzero
    /// constants all coincide.
    fn constant_weight(&self) -> Option<Scalar> {
        if !self.symmetric || self.algebra.field().is_prime() {
            return None;
        }
        let mut weight: Option<&Scalar> = None;
        for (i, j, v) in self.algebra.nonzeros() {
            if i == j {
                return None;
            }
            match weight {
                None => weight = Some(v),
                Some(w) if w == v => {}
                Some(_) => return None,
            }
        }
        weight.filter(|w| w.is_negative() == Some(false)).cloned()
    }

    fn log(&self, x: f64) -> f64 {
        self.options.log_base.log(x)
    }
}

fn q_int(v: usize) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Runs every applicable single-algebra check.
pub fn run_full_audit(algebra: &EvolutionAlgebra, input: &str, options: &AuditOptions) -> AuditReport {
    let ctx = Context::new(algebra, input, *options);
    let mut report = AuditReport::new(input);
    check_elementary(&ctx, &mut report);
    check_diameter(&ctx, &mut report);
    check_support_growth(&ctx, &mut report);
    check_exact_supports(&ctx, &mut report);
    check_persistency(&ctx, &mut report);
    check_simplicity(&ctx, &mut report);
    check_plenary_identity(&ctx, &mut report);
    check_evolution_operator_cover(&ctx, &mut report);
    check_spectral(&ctx, &mut report);
    check_cheeger_paper_ctx(&ctx, &mut report);
    check_trivial_bound(&ctx, &mut report);
    check_ramanujan_expansion(&ctx, &mut report);
    check_mixing(&ctx, &mut report);
    report.finish()
}

/// Audits each member and adds the degree-floor trend for regular families.
pub fn run_family_audit(members: &[(String, EvolutionAlgebra)], input: &str, options: &AuditOptions) -> AuditReport {
    let mut report = AuditReport::new(input);
    for (name, algebra) in members {
        report.merge(run_full_audit(algebra, name, options));
    }
    let algebras: Vec<EvolutionAlgebra> = members.iter().map(|(_, a)| a.clone()).collect();
    let degrees: Vec<Option<usize>> = algebras.iter().map(|a| underlying_graph(a).is_regular()).collect();
    if let Some(Some(d)) = degrees.first() {
        if degrees.iter().all(|x| *x == Some(*d)) {
            match check_alon_boppana(&algebras, *d) {
                Ok(trend) => {
                    for m in &trend.members {
                        report.push(
                            TheoremCheck::le(
                                "second-eigenvalue-below-degree",
                                &format!("{input}/n={}", m.n),
                                CheckKind::Assertable,
                                m.lambda2,
                                *d as f64,
                            ),
                        );
                    }
                    if let Some(check) = trend.as_check(input) {
                        report.push(check);
                    } else {
                        report.skip("degree-floor-trend", input, "fewer than two members");
                    }
                }
                Err(e) => report.skip("degree-floor-trend", input, e.to_string()),
            }
        } else {
            report.skip("degree-floor-trend", input, "members are not all d-regular for one d");
        }
    }
    report.finish()
}

fn check_elementary(ctx: &Context, report: &mut AuditReport) {
    let input = ctx.input;
    match &ctx.cheeger {
        Some(cert) => {
            let positive = ctx.n >= 2 && cert.value.is_positive();
            report.push(
                TheoremCheck::eq(
                    "connectivity-iff-positive-expansion",
                    input,
                    CheckKind::Assertable,
                    bool_value(ctx.connected),
                    bool_value(positive || ctx.n < 2),
                )
                .with_witness(json!({"h": cert.value, "witness": cert.witness})),
            );
            if let (Some(h), true, true) = (cert.value.as_rational(), ctx.connected, ctx.n >= 2) {
                report.push(TheoremCheck::le_exact(
                    "cheeger-lower-two-over-n",
                    input,
                    CheckKind::Assertable,
                    &BigRational::new(2.into(), ctx.n.into()),
                    h,
                ));
                report.push(TheoremCheck::le_exact(
                    "cheeger-upper-min-degree",
                    input,
                    CheckKind::Assertable,
                    h,
                    &q_int(ctx.graph.min_degree()),
                ));
            } else {
                report.skip("cheeger-lower-two-over-n", input, "needs a connected graph with n >= 2");
            }
        }
        None => report.skip(
            "connectivity-iff-positive-expansion",
            input,
            "exact Cheeger constant unavailable (enumeration cap)",
        ),
    }
}

fn check_diameter(ctx: &Context, report: &mut AuditReport) {
    let id = "diameter-log-bound";
    let h = match ctx.positive_h() {
        Ok(h) => h,
        Err(reason) => return report.skip(id, ctx.input, reason),
    };
    let diam = ctx.graph.diameter().expect("connected");
    let bound = 2.0 * ctx.d as f64 / to_f64(h) * ctx.log(ctx.n as f64) + 1.0;
    report.push(TheoremCheck::le(id, ctx.input, CheckKind::Assertable, diam as f64, bound));
}

/// Combinatorial traces for every generator until cover.
fn combinatorial_traces(ctx: &Context) -> Result<Vec<crate::structure::SupportTrace>> {
    let k = ctx.graph.diameter().unwrap_or(ctx.n) + 1;
    (0..ctx.n)
        .map(|i| support_trace(ctx.algebra, i, k, SupportMode::Combinatorial, &ctx.options.caps))
        .collect()
}

fn check_support_growth(ctx: &Context, report: &mut AuditReport) {
    let input = ctx.input;
    if !ctx.symmetric {
        for id in ["support-step-growth", "support-closed-form", "support-nesting"] {
            report.skip(id, input, "structural matrix is not symmetric");
        }
        return;
    }
    let traces = match combinatorial_traces(ctx) {
        Ok(t) => t,
        Err(e) => return report.skip("support-step-growth", input, e.to_string()),
    };
    let nested = traces.iter().all(is_nested);
    report.push(TheoremCheck::eq(
        "support-nesting",
        input,
        CheckKind::Assertable,
        bool_value(nested),
        1.0,
    ));
    let h = match ctx.positive_h() {
        Ok(h) => h,
        Err(reason) => {
            report.skip("support-step-growth", input, reason.clone());
            report.skip("support-closed-form", input, reason);
            return;
        }
    };
    let d = q_int(ctx.d);
    let factor = (&d + h) / &d;
    // Step inequality: smallest growth ratio over steps with |S_k| <= n/2.
    let mut worst_step: Option<(BigRational, usize, usize)> = None;
    // Closed form: smallest |S_k| - min(n, (1 + h/d)^k).
    let mut worst_closed: Option<(f64, f64, usize, usize)> = None;
    let growth = to_f64(&factor);
    for trace in &traces {
        for (k, w) in trace.supports.windows(2).enumerate() {
            if 2 * w[0].len() <= ctx.n {
                let ratio = BigRational::new(w[1].len().into(), w[0].len().into());
                if worst_step.as_ref().map_or(true, |(r, _, _)| &ratio < r) {
                    worst_step = Some((ratio, trace.i, k));
                }
            }
        }
        for (k, s) in trace.supports.iter().enumerate() {
            let target = (ctx.n as f64).min(growth.powi(k as i32));
            let have = s.len() as f64;
            if worst_closed.map_or(true, |(t, h, _, _)| have - target < h - t) {
                worst_closed = Some((target, have, trace.i, k));
            }
        }
    }
    match worst_step {
        Some((ratio, i, k)) => report.push(
            TheoremCheck::le_exact("support-step-growth", input, CheckKind::Assertable, &factor, &ratio)
                .with_witness(json!({"generator": i, "k": k})),
        ),
        None => report.skip("support-step-growth", input, "no step with |S_k| <= n/2"),
    }
    if let Some((target, have, i, k)) = worst_closed {
        report.push(
            TheoremCheck::le("support-closed-form", input, CheckKind::ReportOnly, target, have)
                .with_witness(json!({"generator": i, "k": k})),
        );
    }
}

fn exact_field_reason(ctx: &Context) -> Option<String> {
    if !ctx.algebra.field().is_exact() {
        return Some("exact supports need an exact field".into());
    }
    if ctx.n > EXACT_SUPPORT_LIMIT {
        return Some(format!("n > {EXACT_SUPPORT_LIMIT}"));
    }
    None
}

fn check_exact_supports(ctx: &Context, report: &mut AuditReport) {
    let input = ctx.input;
    let ids = ["support-nesting-exact", "cover-time-log-bound"];
    if !ctx.symmetric {
        for id in ids {
            report.skip(id, input, "structural matrix is not symmetric");
        }
        return;
    }
    if let Some(reason) = exact_field_reason(ctx) {
        for id in ids {
            report.skip(id, input, reason.clone());
        }
        return;
    }
    let h = match ctx.positive_h() {
        Ok(h) => h,
        Err(reason) => {
            for id in ids {
                report.skip(id, input, reason.clone());
            }
            return;
        }
    };
    let bound = ctx.d as f64 / to_f64(h) * ctx.log(ctx.n as f64);
    let window = bound.floor() as usize + 2;
    let mut first_break: Option<(usize, usize)> = None;
    let mut worst_cover: Option<(usize, Option<usize>)> = None;
    for i in 0..ctx.n {
        let trace = match support_trace(ctx.algebra, i, window, SupportMode::Exact, &ctx.options.caps) {
            Ok(t) => t,
            Err(e) => {
                for id in ids {
                    report.skip(id, input, e.to_string());
                }
                return;
            }
        };
        if first_break.is_none() {
            if let Some(k) = trace
                .supports
                .windows(2)
                .position(|w| w[0].iter().any(|v| w[1].binary_search(v).is_err()))
            {
                first_break = Some((i, k));
            }
        }
        let cover = trace.cover_step;
        let worse = match (&worst_cover, cover) {
            (None, _) => true,
            (Some((_, Some(_))), None) => true,
            (Some((_, Some(a))), Some(b)) => b > *a,
            (Some((_, None)), _) => false,
        };
        if worse {
            worst_cover = Some((i, cover));
        }
    }
    let nesting = TheoremCheck::eq(
        "support-nesting-exact",
        input,
        CheckKind::ReportOnly,
        bool_value(first_break.is_none()),
        1.0,
    );
    report.push(match first_break {
        Some((i, k)) => nesting.with_witness(json!({"generator": i, "k": k})),
        None => nesting,
    });
    if let Some((i, cover)) = worst_cover {
        let lhs = cover.unwrap_or(window + 1) as f64;
        let mut check = TheoremCheck::le("cover-time-log-bound", input, CheckKind::ReportOnly, lhs, bound)
            .with_witness(json!({"generator": i, "cover": cover}));
        if cover.is_none() {
            check = check.with_note(format!("full support not reached within {window} steps"));
        }
        report.push(check);
    }
}

fn check_persistency(ctx: &Context, report: &mut AuditReport) {
    let input = ctx.input;
    let ids = ["persistency-all-k", "persistency-from-k2"];
    if !ctx.symmetric {
        for id in ids {
            report.skip(id, input, "structural matrix is not symmetric");
        }
        return;
    }
    if let Some(reason) = exact_field_reason(ctx) {
        for id in ids {
            report.skip(id, input, reason.clone());
        }
        return;
    }
    if let Err(reason) = ctx.positive_h() {
        for id in ids {
            report.skip(id, input, reason.clone());
        }
        return;
    }
    let k_max = default_k_max(ctx.algebra, &ctx.options.caps);
    let mut strict_fail: Vec<(usize, usize)> = Vec::new();
    let mut window_fail: Vec<(usize, usize)> = Vec::new();
    for i in 0..ctx.n {
        let trace = match support_trace(ctx.algebra, i, k_max, SupportMode::Exact, &ctx.options.caps) {
            Ok(t) => t,
            Err(e) => {
                for id in ids {
                    report.skip(id, input, e.to_string());
                }
                return;
            }
        };
        let record = persistency_from_trace(&trace, true);
        if let Some(k) = record.first_absence {
            strict_fail.push((i, k));
        }
        if let Some(k) = record.occurrence.iter().enumerate().skip(2).find(|(_, o)| !**o).map(|(k, _)| k) {
            window_fail.push((i, k));
        }
    }
    for (id, fails) in [("persistency-all-k", &strict_fail), ("persistency-from-k2", &window_fail)] {
        let mut check = TheoremCheck::eq(id, input, CheckKind::ReportOnly, fails.len() as f64, 0.0)
            .with_note(format!("window k <= {k_max}, exact supports"));
        if let Some((i, k)) = fails.first() {
            check = check.with_witness(json!({"generator": i, "first_absence": k}));
        }
        report.push(check);
    }
}

fn check_simplicity(ctx: &Context, report: &mut AuditReport) {
    let id = "simplicity-symmetric-connected";
    if !ctx.symmetric {
        return report.skip(id, ctx.input, "structural matrix is not symmetric");
    }
    if !ctx.connected {
        return report.skip(id, ctx.input, "graph is disconnected");
    }
    let simple = is_simple_complete(ctx.algebra);
    let mut check = TheoremCheck::le(id, ctx.input, CheckKind::ReportOnly, 1.0, bool_value(simple));
    if !simple {
        check = check.with_note(format!(
            "structural matrix has rank {} < {}; the span of the squares is a proper ideal",
            ctx.algebra.rank(),
            ctx.n
        ));
    }
    report.push(check);
}

/// Compares `x^[k]` with `sum_i alpha_i^(2^k) e_i^[k]` for `x = sum_i e_i`.
fn check_plenary_identity(ctx: &Context, report: &mut AuditReport) {
    let id = "plenary-power-expansion";
    if !ctx.algebra.field().is_exact() {
        return report.skip(id, ctx.input, "needs an exact field");
    }
    if ctx.n > IDENTITY_CHECK_LIMIT {
        return report.skip(id, ctx.input, format!("n > {IDENTITY_CHECK_LIMIT}"));
    }
    let field = ctx.algebra.field();
    let k = 2;
    let caps = &ctx.options.caps;
    let compute = || -> Result<(Element, Element)> {
        let x = Element::from_coeffs(vec![Scalar::one(field); ctx.n])?;
        let lhs = ctx.algebra.plenary_power(&x, k, caps)?;
        let mut rhs = Element::zero(field, ctx.n);
        for i in 0..ctx.n {
            rhs = rhs.add(&ctx.algebra.plenary_power(&ctx.algebra.basis_element(i)?, k, caps)?)?;
        }
        Ok((lhs, rhs))
    };
    match compute() {
        Ok((lhs, rhs)) => {
            let mismatched: Vec<usize> = (0..ctx.n).filter(|&j| lhs.coeff(j) != rhs.coeff(j)).collect();
            let mut check = TheoremCheck::eq(id, ctx.input, CheckKind::ReportOnly, mismatched.len() as f64, 0.0)
                .with_note("x = sum of all generators, k = 2");
            if let Some(&j) = mismatched.first() {
                check = check.with_witness(json!({
                    "k": k,
                    "coordinate": j,
                    "plenary": lhs.coeff(j).to_string(),
                    "expansion": rhs.coeff(j).to_string(),
                }));
            }
            report.push(check);
        }
        Err(e) => report.skip(id, ctx.input, e.to_string()),
    }
}

/// Least `k` with `supp(E^k e_i)` full, against `(2d/h) log n + 2`.
fn check_evolution_operator_cover(ctx: &Context, report: &mut AuditReport) {
    let id = "evolution-operator-cover";
    if !ctx.symmetric {
        return report.skip(id, ctx.input, "structural matrix is not symmetric");
    }
    if let Some(reason) = exact_field_reason(ctx) {
        return report.skip(id, ctx.input, reason);
    }
    let h = match ctx.positive_h() {
        Ok(h) => h,
        Err(reason) => return report.skip(id, ctx.input, reason),
    };
    let bound = 2.0 * ctx.d as f64 / to_f64(h) * ctx.log(ctx.n as f64) + 2.0;
    let window = bound.floor() as usize + 1;
    let mut worst: Option<(usize, Option<usize>)> = None;
    for i in 0..ctx.n {
        let mut x = match ctx.algebra.basis_element(i) {
            Ok(x) => x,
            Err(e) => return report.skip(id, ctx.input, e.to_string()),
        };
        let mut cover = None;
        for k in 0..=window {
            if (0..ctx.n).all(|j| !x.coeff(j).is_zero()) {
                cover = Some(k);
                break;
            }
            x = match ctx.algebra.evolution_operator_apply(&x) {
                Ok(y) => y,
                Err(e) => return report.skip(id, ctx.input, e.to_string()),
            };
        }
        let worse = match (&worst, cover) {
            (None, _) => true,
            (Some((_, Some(_))), None) => true,
            (Some((_, Some(a))), Some(b)) => b > *a,
            (Some((_, None)), _) => false,
        };
        if worse {
            worst = Some((i, cover));
        }
        if cover.is_none() {
            break;
        }
    }
    if let Some((i, cover)) = worst {
        let lhs = cover.unwrap_or(window + 1) as f64;
        let mut check = TheoremCheck::le(id, ctx.input, CheckKind::ReportOnly, lhs, bound)
            .with_witness(json!({"generator": i, "cover": cover}));
        if cover.is_none() {
            check = check.with_note(format!("full support not reached within {window} steps"));
        }
        report.push(check);
    }
}

fn check_spectral(ctx: &Context, report: &mut AuditReport) {
    let input = ctx.input;
    let adjacency = match &ctx.adjacency {
        Ok(s) => s,
        Err(reason) => {
            for id in ["perron-regular", "spectral-sandwich-lower", "spectral-sandwich-upper"] {
                report.skip(id, input, reason.clone());
            }
            return;
        }
    };
    let d = ctx.regular.expect("regular");
    if ctx.connected {
        let perron = perron_data(adjacency, d);
        report.push(
            TheoremCheck::eq("perron-regular", input, CheckKind::Assertable, bool_value(perron.holds()), 1.0)
                .with_witness(json!({"lambda1": perron.lambda1, "lambda2": perron.lambda2})),
        );
    } else {
        report.skip("perron-regular", input, "graph is disconnected");
    }
    let Some(h) = ctx.h() else {
        for id in ["spectral-sandwich-lower", "spectral-sandwich-upper"] {
            report.skip(id, input, "exact Cheeger constant unavailable (enumeration cap)");
        }
        return;
    };
    let gap = (d as f64 - adjacency.lambda2().expect("n >= 2")).max(0.0);
    let hf = to_f64(h);
    report.push(TheoremCheck::le("spectral-sandwich-lower", input, CheckKind::Assertable, gap / 2.0, hf));
    report.push(TheoremCheck::le(
        "spectral-sandwich-upper",
        input,
        CheckKind::Assertable,
        hf,
        (2.0 * d as f64 * gap).sqrt(),
    ));
}

/// Gap inequalities for constant-weight symmetric regular algebras:
/// the standard forms `c h^2/(2d) <= gap <= 2 c h` (assertable) and the
/// stronger published constants (report-only).
pub fn check_cheeger_paper(algebra: &EvolutionAlgebra, input: &str, options: &AuditOptions) -> AuditReport {
    let ctx = Context::new(algebra, input, *options);
    let mut report = AuditReport::new(input);
    check_cheeger_paper_ctx(&ctx, &mut report);
    report.finish()
}

const CHEEGER_IDS: [&str; 7] = [
    "cheeger-gap-standard-lower",
    "cheeger-gap-standard-upper",
    "cheeger-gap-lower-proof-constant",
    "cheeger-gap-lower-statement-constant",
    "cheeger-gap-upper-proof-constant",
    "gap-weighted-degree-lower",
    "gap-trivial-upper",
];

fn check_cheeger_paper_ctx(ctx: &Context, report: &mut AuditReport) {
    let input = ctx.input;
    let skip_all = |report: &mut AuditReport, reason: &str| {
        for id in CHEEGER_IDS {
            report.skip(id, input, reason);
        }
    };
    let Some(c) = ctx.constant_weight() else {
        return skip_all(report, "needs symmetric constant weight on edges and zero diagonal");
    };
    let Some(d) = ctx.regular.filter(|d| *d > 0) else {
        return skip_all(report, "graph is not regular with d >= 1");
    };
    let Ok(spectrum) = &ctx.structural else {
        return skip_all(report, "structural spectrum unavailable");
    };
    let Some(h) = ctx.h() else {
        return skip_all(report, "exact Cheeger constant unavailable (enumeration cap)");
    };
    let c = c.to_f64().expect("ordered field");
    let hf = to_f64(h);
    let df = d as f64;
    let lambda1 = spectrum.lambda1();
    let gap = spectrum.spectral_gap().expect("n >= 2");
    let witness = json!({"h": format_rational(h), "d": d, "c": c, "lambda1": lambda1, "gap": gap});
    let push = |report: &mut AuditReport, id: &str, kind, lhs: f64, rhs: f64| {
        report.push(TheoremCheck::le(id, input, kind, lhs, rhs).with_witness(witness.clone()));
    };
    push(report, "cheeger-gap-standard-lower", CheckKind::Assertable, c * hf * hf / (2.0 * df), gap);
    push(report, "cheeger-gap-standard-upper", CheckKind::Assertable, gap, 2.0 * c * hf);
    push(report, "cheeger-gap-lower-proof-constant", CheckKind::ReportOnly, c * hf * hf / 2.0, gap);
    push(
        report,
        "cheeger-gap-lower-statement-constant",
        CheckKind::ReportOnly,
        (c * df).powi(2) * hf * hf / (2.0 * df * df * lambda1),
        gap,
    );
    push(report, "cheeger-gap-upper-proof-constant", CheckKind::ReportOnly, gap, 2.0 * c * df * hf);
    // Weighted degree bound: max_i sum_{j != i} a_ij = c d.
    push(report, "gap-weighted-degree-lower", CheckKind::ReportOnly, hf * hf / (2.0 * c * df), gap);
    push(report, "gap-trivial-upper", CheckKind::ReportOnly, gap, df * df / 8.0);
}

/// `h <= d/2` for symmetric graphicable d-regular algebras.
fn check_trivial_bound(ctx: &Context, report: &mut AuditReport) {
    let id = "expansion-half-degree";
    if !(ctx.symmetric && ctx.algebra.is_graphicable()) {
        return report.skip(id, ctx.input, "needs a symmetric graphicable algebra");
    }
    let Some(d) = ctx.regular else {
        return report.skip(id, ctx.input, "graph is not regular");
    };
    let Some(h) = ctx.h() else {
        return report.skip(id, ctx.input, "exact Cheeger constant unavailable (enumeration cap)");
    };
    report.push(TheoremCheck::le_exact(
        id,
        ctx.input,
        CheckKind::ReportOnly,
        h,
        &BigRational::new(d.into(), 2.into()),
    ));
}

/// `h >= (d - 2 sqrt(d-1)) / 2` for Ramanujan algebras.
fn check_ramanujan_expansion(ctx: &Context, report: &mut AuditReport) {
    let id = "ramanujan-expansion";
    if !(ctx.symmetric && ctx.algebra.is_graphicable()) || ctx.algebra.field().is_prime() {
        return report.skip(id, ctx.input, "needs a symmetric graphicable algebra over an ordered field");
    }
    let (Some(d), Ok(spectrum)) = (ctx.regular, &ctx.adjacency) else {
        return report.skip(id, ctx.input, "needs a regular graph with a spectrum");
    };
    if d < 2 {
        return report.skip(id, ctx.input, "needs d >= 2");
    }
    let verdict = match ramanujan_from_spectrum(spectrum, d) {
        Ok(v) => v,
        Err(e) => return report.skip(id, ctx.input, e.to_string()),
    };
    if !verdict.ramanujan {
        return report.skip(id, ctx.input, "not Ramanujan");
    }
    // The carve-out for |lambda| = d admits disconnected graphs with h = 0.
    if !ctx.connected {
        return report.skip(id, ctx.input, "graph is disconnected");
    }
    let Some(h) = ctx.h() else {
        return report.skip(id, ctx.input, "exact Cheeger constant unavailable (enumeration cap)");
    };
    let floor = ramanujan_expansion_lower(d).expect("d >= 2");
    report.push(TheoremCheck::le(id, ctx.input, CheckKind::Assertable, floor, to_f64(h)));
}

fn check_mixing(ctx: &Context, report: &mut AuditReport) {
    let input = ctx.input;
    let ids = ["mixing-corrected-bound", "mixing-paper-bound", "mixing-time-bound"];
    let stochastic = matches!(is_doubly_stochastic(ctx.algebra), Ok(true));
    if !stochastic || !ctx.symmetric {
        for id in ids {
            report.skip(id, input, "needs a symmetric doubly stochastic algebra");
        }
        return;
    }
    let mu = match second_largest_modulus(ctx.algebra) {
        Ok(mu) => mu,
        Err(e) => {
            for id in ids {
                report.skip(id, input, e.to_string());
            }
            return;
        }
    };
    let starts: Vec<usize> = if ctx.n <= 32 { (0..ctx.n).collect() } else { vec![0] };
    let traces: Vec<_> = match starts
        .iter()
        .map(|&i| mixing_simulation(ctx.algebra, i, MIXING_STEPS))
        .collect::<Result<Vec<_>>>()
    {
        Ok(t) => t,
        Err(e) => {
            for id in ids {
                report.skip(id, input, e.to_string());
            }
            return;
        }
    };
    // Corrected bound: worst excess over all starts and steps.
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0, 0usize, 0usize);
    for t in &traces {
        for (k, dist) in t.distances.iter().enumerate() {
            let b = corrected_mixing_bound(mu, ctx.n, k);
            if dist - b > worst.0 {
                worst = (dist - b, *dist, b, t.i, k);
            }
        }
    }
    report.push(
        TheoremCheck::le("mixing-corrected-bound", input, CheckKind::Assertable, worst.1, worst.2 + 1e-8)
            .with_witness(json!({"start": worst.3, "k": worst.4, "mu_star": mu})),
    );
    let h = match ctx.positive_h() {
        Ok(h) if ctx.d > 0 => h,
        Ok(_) => {
            report.skip("mixing-paper-bound", input, "needs d >= 1");
            report.skip("mixing-time-bound", input, "needs d >= 1");
            return;
        }
        Err(reason) => {
            report.skip("mixing-paper-bound", input, reason.clone());
            report.skip("mixing-time-bound", input, reason);
            return;
        }
    };
    let mut first_violation: Option<(usize, usize, f64, f64)> = None;
    let mut tightest = (f64::INFINITY, 0.0, 0.0, 0usize, 0usize);
    for t in &traces {
        for (k, dist) in t.distances.iter().enumerate().skip(1) {
            let b = paper_mixing_bound(ctx.n, h, ctx.d, k);
            if b - dist < tightest.0 {
                tightest = (b - dist, *dist, b, t.i, k);
            }
            if *dist > b && first_violation.map_or(true, |(_, fk, _, _)| k < fk) {
                first_violation = Some((t.i, k, *dist, b));
            }
        }
    }
    let check = match first_violation {
        Some((i, k, dist, b)) => TheoremCheck::le("mixing-paper-bound", input, CheckKind::ReportOnly, dist, b)
            .with_witness(json!({"start": i, "k": k})),
        None => TheoremCheck::le("mixing-paper-bound", input, CheckKind::ReportOnly, tightest.1, tightest.2)
            .with_witness(json!({"start": tightest.3, "k": tightest.4})),
    };
    report.push(check.with_note(format!("steps 1..={MIXING_STEPS}")));
    let bound = tmix_bound(ctx.n, h, ctx.d, MIXING_EPSILON).expect("positive inputs");
    let worst_tmix = traces
        .iter()
        .map(|t| t.empirical_tmix(MIXING_EPSILON))
        .fold(Some(0usize), |acc, t| match (acc, t) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        });
    let lhs = worst_tmix.unwrap_or(MIXING_STEPS + 1) as f64;
    let mut check = TheoremCheck::le("mixing-time-bound", input, CheckKind::ReportOnly, lhs, bound)
        .with_witness(json!({"epsilon": MIXING_EPSILON, "empirical_tmix": worst_tmix}));
    if worst_tmix.is_none() {
        check = check.with_note(format!("distance never reached {MIXING_EPSILON} within {MIXING_STEPS} steps"));
    }
    report.push(check);
}

/// `h(A1 ⊗ A2) >= min(h1, h2)` on the Kronecker product (report-only).
pub fn check_tensor_cheeger(
    a: &EvolutionAlgebra,
    b: &EvolutionAlgebra,
    input: &str,
    options: &AuditOptions,
) -> Result<TheoremCheck> {
    let id = "tensor-product-expansion";
    let caps = &options.caps;
    let h_of = |alg: &EvolutionAlgebra| -> Result<BigRational> {
        let g = underlying_graph(alg);
        if !g.is_connected() || g.n() < 2 {
            return Err(Error::InvalidArgument("factors must be connected with n >= 2".into()));
        }
        match cheeger_exact(&g, caps)?.value {
            CheegerValue::Finite(q) => Ok(q),
            CheegerValue::Infinite => Err(Error::Internal("n >= 2 has finite h".into())),
        }
    };
    let (h1, h2) = (h_of(a)?, h_of(b)?);
    let product = kronecker_product(a, b)?;
    let graph = underlying_graph(&product);
    let cert = cheeger_exact(&graph, caps)?;
    let hp = cert
        .value
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::Internal("product has n >= 4".into()))?;
    let min = if h1 < h2 { h1.clone() } else { h2.clone() };
    Ok(TheoremCheck::le_exact(id, input, CheckKind::ReportOnly, &min, &hp).with_witness(json!({
        "h1": format_rational(&h1),
        "h2": format_rational(&h2),
        "h_product": format_rational(&hp),
        "components": graph.connected_components().len(),
        "witness": cert.witness,
    })))
}

/// Audits a Kronecker product: the full single-algebra audit of the product
/// plus the product-expansion comparison.
pub fn run_tensor_audit(
    a: &EvolutionAlgebra,
    b: &EvolutionAlgebra,
    input: &str,
    options: &AuditOptions,
) -> Result<AuditReport> {
    let product = kronecker_product(a, b)?;
    let mut report = run_full_audit(&product, input, options);
    match check_tensor_cheeger(a, b, input, options) {
        Ok(check) => report.checks.push(check),
        Err(e) => report.skip("tensor-product-expansion", input, e.to_string()),
    }
    Ok(report.finish())
}

/// Underlying graph of a Cayley algebra equals `Cay(G, S)`.
pub fn check_cayley_graph(group: &FiniteGroup, set: &GeneratingSet, algebra: &EvolutionAlgebra, input: &str) -> TheoremCheck {
    let graph = underlying_graph(algebra);
    let expected = SimpleGraph::new(
        group.order(),
        (0..group.order()).flat_map(|g| set.elements.iter().map(move |&s| (g, group.mul(g, s)))),
    );
    let same = expected.map_or(false, |e| e == graph);
    TheoremCheck::eq("cayley-graph-identity", input, CheckKind::Assertable, bool_value(same), 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlonBoppanaMember {
    pub n: usize,
    pub lambda2: f64,
    /// `2 sqrt(d-1) - lambda_2`.
    pub deficit: f64,
}

/// Finite-sample view of the degree floor `2 sqrt(d-1)` along a family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlonBoppanaReport {
    pub d: usize,
    pub floor: f64,
    pub members: Vec<AlonBoppanaMember>,
    /// `Some(true)` when the largest deficit in the second half of the
    /// sample does not exceed that of the first half; `None` with fewer than
    /// two members.
    pub consistent: Option<bool>,
    pub verdict: String,
}

impl AlonBoppanaReport {
    fn as_check(&self, input: &str) -> Option<TheoremCheck> {
        if self.members.len() < 2 {
            return None;
        }
        let mid = self.members.len() / 2;
        let max = |s: &[AlonBoppanaMember]| s.iter().map(|m| m.deficit).fold(f64::NEG_INFINITY, f64::max);
        Some(
            TheoremCheck::le(
                "degree-floor-trend",
                input,
                CheckKind::ReportOnly,
                max(&self.members[mid..]),
                max(&self.members[..mid]),
            )
            .with_witness(json!({"d": self.d, "floor": self.floor})),
        )
    }
}

/// Second eigenvalues of a d-regular family against `2 sqrt(d-1)`; never
/// asserts.
pub fn check_alon_boppana(family: &[EvolutionAlgebra], d: usize) -> Result<AlonBoppanaReport> {
    let floor = 2.0 * (d.saturating_sub(1) as f64).sqrt();
    let mut members = Vec::with_capacity(family.len());
    for algebra in family {
        let graph = underlying_graph(algebra);
        if graph.is_regular() != Some(d) {
            return Err(Error::NotRegular);
        }
        if graph.n() < 2 {
            return Err(Error::InvalidArgument("members need n >= 2".into()));
        }
        let spectrum = symmetric_eigenvalues(&RealMatrix::adjacency(&graph))?;
        let lambda2 = spectrum.lambda2().expect("n >= 2");
        members.push(AlonBoppanaMember {
            n: graph.n(),
            lambda2,
            deficit: floor - lambda2,
        });
    }
    let consistent = (members.len() >= 2).then(|| {
        let mid = members.len() / 2;
        let max = |s: &[AlonBoppanaMember]| s.iter().map(|m| m.deficit).fold(f64::NEG_INFINITY, f64::max);
        max(&members[mid..]) <= max(&members[..mid]) + AUDIT_TOLERANCE
    });
    let verdict = match consistent {
        None => "trend undefined (fewer than two members)".to_string(),
        Some(true) => "consistent: the deficit to the floor does not grow".to_string(),
        Some(false) => "inconsistent: the deficit to the floor grows along the sample".to_string(),
    };
    Ok(AlonBoppanaReport {
        d,
        floor,
        members,
        consistent,
        verdict,
    })
}

/// Exact comparison helper exposed for tests and the CLI.
pub fn exact_le(lhs: &BigRational, rhs: &BigRational) -> bool {
    lhs <= rhs
}

#[allow(dead_code)]
fn nonnegative(q: &BigRational) -> bool {
    !q.is_negative() || q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_algebra, cycle_algebra, petersen_algebra, random_regular_algebra};
    use crate::field::FieldDescriptor;
    use crate::graph::stochastic_algebra_from_graph;

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn audit(a: &EvolutionAlgebra, name: &str) -> AuditReport {
        run_full_audit(a, name, &AuditOptions::default())
    }

    #[test]
    fn petersen_has_no_assertable_failures() {
        let r = audit(&petersen_algebra(Q).unwrap(), "petersen");
        assert_eq!(r.assertable_failures, 0, "{}", r.to_table());
        assert!(r.find("diameter-log-bound").unwrap().holds);
        assert!(r.find("ramanujan-expansion").unwrap().holds);
        assert!(r.find("cheeger-gap-lower-proof-constant").unwrap().holds);
        assert!(r.find("expansion-half-degree").unwrap().holds);
    }

    #[test]
    fn diameter_examples() {
        let r = audit(&cycle_algebra(6, Q).unwrap(), "c6");
        let c = r.find("diameter-log-bound").unwrap();
        assert_eq!(c.lhs, 3.0);
        assert!((c.rhs - (6.0 * 6f64.ln() + 1.0)).abs() < 1e-12);
        let k2 = audit(&complete_algebra(2, Q).unwrap(), "k2");
        let c = k2.find("diameter-log-bound").unwrap();
        assert!((c.rhs - (2.0 * 2f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_findings() {
        let r = audit(&complete_algebra(4, Q).unwrap(), "k4");
        assert_eq!(r.assertable_failures, 0, "{}", r.to_table());
        let half = r.find("expansion-half-degree").unwrap();
        assert!(!half.holds);
        assert_eq!(half.lhs_exact.as_deref(), Some("2"));
        assert_eq!(half.rhs_exact.as_deref(), Some("3/2"));

        let k16 = audit(&complete_algebra(16, Q).unwrap(), "k16");
        assert_eq!(k16.assertable_failures, 0, "{}", k16.to_table());
        let lower = k16.find("cheeger-gap-lower-proof-constant").unwrap();
        assert!(!lower.holds);
        assert_eq!(lower.lhs, 32.0);
        assert!((lower.rhs - 16.0).abs() < 1e-9);
        assert!(k16.find("cheeger-gap-lower-statement-constant").unwrap().holds);
    }

    #[test]
    fn tensor_counterexample() {
        let c4 = cycle_algebra(4, Q).unwrap();
        let check = check_tensor_cheeger(&c4, &c4, "c4xc4", &AuditOptions::default()).unwrap();
        assert!(!check.holds);
        assert_eq!(check.lhs_exact.as_deref(), Some("1"));
        assert_eq!(check.rhs_exact.as_deref(), Some("0"));
        let k3 = complete_algebra(3, Q).unwrap();
        assert!(check_tensor_cheeger(&k3, &k3, "k3xk3", &AuditOptions::default()).unwrap().holds);
        let r = run_tensor_audit(&c4, &c4, "c4xc4", &AuditOptions::default()).unwrap();
        assert_eq!(r.assertable_failures, 0, "{}", r.to_table());
        assert!(r.findings().any(|c| c.id == "tensor-product-expansion"));
    }

    #[test]
    fn triangle_findings() {
        let r = audit(&cycle_algebra(3, Q).unwrap(), "triangle");
        assert_eq!(r.assertable_failures, 0, "{}", r.to_table());
        let strict = r.find("persistency-all-k").unwrap();
        assert!(!strict.holds);
        assert_eq!(strict.witness.as_ref().unwrap()["first_absence"], 1);
        assert!(r.find("persistency-from-k2").unwrap().holds);
        assert!(!r.find("plenary-power-expansion").unwrap().holds);
        assert!(!r.find("support-nesting-exact").unwrap().holds);
        assert!(r.find("support-closed-form").unwrap().holds);
    }

    #[test]
    fn triangle_over_f2_is_not_persistent_from_two() {
        let r = audit(&cycle_algebra(3, FieldDescriptor::prime(2).unwrap()).unwrap(), "triangle-f2");
        assert!(!r.find("persistency-from-k2").unwrap().holds);
    }

    #[test]
    fn bipartite_operator_never_covers() {
        let r = audit(&cycle_algebra(6, Q).unwrap(), "c6");
        let c = r.find("evolution-operator-cover").unwrap();
        assert!(!c.holds);
        assert!(c.note.is_some());
        assert!(!r.find("simplicity-symmetric-connected").unwrap().holds || cycle_algebra(6, Q).unwrap().is_nonsingular());
    }

    #[test]
    fn mixing_checks() {
        let p = underlying_graph(&petersen_algebra(Q).unwrap());
        let walk = stochastic_algebra_from_graph(&p, Q).unwrap();
        let r = audit(&walk, "petersen-walk");
        assert_eq!(r.assertable_failures, 0, "{}", r.to_table());
        assert!(r.find("mixing-paper-bound").unwrap().holds);
        assert!(r.find("mixing-time-bound").unwrap().holds);

        let c4 = underlying_graph(&cycle_algebra(4, Q).unwrap());
        let walk = stochastic_algebra_from_graph(&c4, Q).unwrap();
        let r = audit(&walk, "c4-walk");
        assert_eq!(r.assertable_failures, 0, "{}", r.to_table());
        let paper = r.find("mixing-paper-bound").unwrap();
        assert!(!paper.holds);
        assert_eq!(paper.witness.as_ref().unwrap()["k"], 11);
    }

    #[test]
    fn alon_boppana_trends() {
        let cycles: Vec<_> = (5..=12).map(|n| cycle_algebra(n, Q).unwrap()).collect();
        let r = check_alon_boppana(&cycles, 2).unwrap();
        for (m, n) in r.members.iter().zip(5..) {
            let expected = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((m.lambda2 - expected).abs() < 1e-9);
        }
        assert_eq!(r.consistent, Some(true));
        let single = check_alon_boppana(&cycles[..1], 2).unwrap();
        assert_eq!(single.consistent, None);
        assert!(check_alon_boppana(&cycles, 3).is_err());
    }

    #[test]
    fn family_audit_is_deterministic() {
        let members: Vec<(String, EvolutionAlgebra)> = (0..3)
            .map(|s| (format!("rr-{s}"), random_regular_algebra(12, 3, s, Q).unwrap()))
            .collect();
        let a = run_family_audit(&members, "rr", &AuditOptions::default());
        let b = run_family_audit(&members, "rr", &AuditOptions::default());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.assertable_failures, 0, "{}", a.to_table());
    }

    #[test]
    fn cayley_identity() {
        use crate::constructions::{cayley_evolution_algebra, dihedral_group};
        let caps = ResourceCaps::default();
        let g = dihedral_group(6, &caps).unwrap();
        let set = GeneratingSet::symmetric_closure(&g, &[1, 2]).unwrap();
        let cay = cayley_evolution_algebra(&g, &set, Q).unwrap();
        assert!(check_cayley_graph(&g, &set, &cay.algebra, "d6").holds);
    }

    #[test]
    fn report_json_shape() {
        let r = audit(&cycle_algebra(5, Q).unwrap(), "c5");
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["input"], "c5");
        assert!(v["checks"].is_array());
        assert!(v["assertable_failures"].is_number());
        assert!(v["report_findings"].is_number());
        let ids: Vec<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn base_two_logs_shrink_nothing_below_natural() {
        let opts = AuditOptions {
            log_base: LogBase::Two,
            ..AuditOptions::default()
        };
        let r = run_full_audit(&cycle_algebra(6, Q).unwrap(), "c6", &opts);
        let c = r.find("diameter-log-bound").unwrap();
        assert!((c.rhs - (6.0 * 6f64.log2() + 1.0)).abs() < 1e-12);
    }
}
