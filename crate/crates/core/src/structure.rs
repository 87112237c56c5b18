//! Structure read off the graph: components, simplicity, support dynamics
//! of plenary powers, cover times, persistency and algebraic distance.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{element_support, EvolutionAlgebra, REAL_SUPPORT_TOLERANCE};
use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::expansion::{cheeger_exact, CheegerValue};
use crate::field::FieldDescriptor;
use crate::graph::{digraph, underlying_graph, SimpleGraph};

pub fn is_connected_algebra(algebra: &EvolutionAlgebra) -> bool {
    underlying_graph(algebra).is_connected()
}

/// Connected components of the underlying graph; each spans an evolution
/// subalgebra and the algebra is their direct sum.
pub fn decompose(algebra: &EvolutionAlgebra) -> Vec<Vec<usize>> {
    underlying_graph(algebra).connected_components()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Simplicity {
    Simple,
    NotSimple,
    ConnectedButUnresolved,
}

/// Simplicity verdict.
///
/// * disconnected: not simple (a component spans a proper ideal);
/// * singular structural matrix: not simple (`A^2` is a proper ideal, or
///   zero);
/// * some proper vertex set closed under out-arcs: not simple (it spans an
///   ideal);
/// * symmetric, connected, nonsingular: simple;
/// * anything else: connected but unresolved.
pub fn is_simple(algebra: &EvolutionAlgebra) -> Simplicity {
    if !is_connected_algebra(algebra) || !algebra.is_nonsingular() {
        return Simplicity::NotSimple;
    }
    if algebra.is_symmetric() {
        return Simplicity::Simple;
    }
    if !digraph(algebra).is_strongly_connected() {
        return Simplicity::NotSimple;
    }
    Simplicity::ConnectedButUnresolved
}

/// Complete simplicity test: nonsingular and strongly connected. Given a
/// nonzero ideal `I` and `x` in it, `e_j x = x_j e_j^2` puts `e_j^2` in `I`
/// for `j` in the support, and `e_j^2 e_k = a_jk e_k^2` propagates along
/// arcs; strong connectivity then puts every `e_k^2` in `I`, and
/// nonsingularity makes those a basis.
pub fn is_simple_complete(algebra: &EvolutionAlgebra) -> bool {
    algebra.is_nonsingular() && digraph(algebra).is_strongly_connected()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportMode {
    /// `S_{k+1} = S_k ∪ N(S_k)` on the underlying graph.
    #[serde(rename = "combinatorial")]
    Combinatorial,
    /// `S_k = supp(e_i^[k])` computed in the algebra's own field.
    #[serde(rename = "exact-field")]
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportTrace {
    pub i: usize,
    pub mode: SupportMode,
    pub supports: Vec<Vec<usize>>,
    #[serde(rename = "cover")]
    pub cover_step: Option<usize>,
}

/// True when no column mixes signs, so `sum_j x_j^2 a_jl` cannot cancel.
fn columns_sign_consistent(algebra: &EvolutionAlgebra) -> bool {
    let n = algebra.dim();
    let mut sign = vec![0i8; n];
    for (_, l, v) in algebra.nonzeros() {
        let s = match v.is_negative() {
            Some(true) => -1,
            Some(false) => 1,
            None => return false,
        };
        if sign[l] == 0 {
            sign[l] = s;
        } else if sign[l] != s {
            return false;
        }
    }
    true
}

/// Stepper yielding successive supports.
enum Stepper<'a> {
    Combinatorial(SimpleGraph),
    /// Exact supports when cancellation is impossible: the support of
    /// `x^2` is the union of the rows of `supp(x)`.
    Rows(&'a EvolutionAlgebra),
    Arithmetic {
        algebra: &'a EvolutionAlgebra,
        current: crate::algebra::Element,
        bit_cap: u64,
    },
}

impl<'a> Stepper<'a> {
    fn new(algebra: &'a EvolutionAlgebra, i: usize, mode: SupportMode, caps: &ResourceCaps) -> Result<Self> {
        let n = algebra.dim();
        if i >= n {
            return Err(Error::VertexOutOfRange { vertex: i, n });
        }
        Ok(match mode {
            SupportMode::Combinatorial => Stepper::Combinatorial(underlying_graph(algebra)),
            SupportMode::Exact => {
                match algebra.field() {
                    FieldDescriptor::Real => {
                        return Err(Error::InvalidArgument(
                            "exact support mode needs an exact field; use combinatorial mode over the reals".into(),
                        ))
                    }
                    FieldDescriptor::Rational if columns_sign_consistent(algebra) => {
                        Stepper::Rows(algebra)
                    }
                    _ => Stepper::Arithmetic {
                        algebra,
                        current: algebra.basis_element(i)?,
                        bit_cap: caps.coefficient_bits,
                    },
                }
            }
        })
    }

    fn step(&mut self, support: &[usize]) -> Result<Vec<usize>> {
        match self {
            Stepper::Combinatorial(graph) => {
                let mut inside = vec![false; graph.n()];
                for &v in support {
                    inside[v] = true;
                    for &u in graph.neighbors(v) {
                        inside[u] = true;
                    }
                }
                Ok(indices(&inside))
            }
            Stepper::Rows(algebra) => {
                let mut inside = vec![false; algebra.dim()];
                for &v in support {
                    for (l, _) in algebra.row(v) {
                        inside[*l] = true;
                    }
                }
                Ok(indices(&inside))
            }
            Stepper::Arithmetic {
                algebra,
                current,
                bit_cap,
            } => {
                let next = algebra.square(current)?;
                let bits = next.max_bit_len();
                if bits > *bit_cap {
                    return Err(Error::CoefficientCapExceeded { bits, cap: *bit_cap });
                }
                *current = next;
                Ok(element_support(current, REAL_SUPPORT_TOLERANCE))
            }
        }
    }
}

fn indices(flags: &[bool]) -> Vec<usize> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, f)| **f)
        .map(|(k, _)| k)
        .collect()
}

/// `S_0, ..., S_{k_max}` for generator `i`.
pub fn support_trace(
    algebra: &EvolutionAlgebra,
    i: usize,
    k_max: usize,
    mode: SupportMode,
    caps: &ResourceCaps,
) -> Result<SupportTrace> {
    let n = algebra.dim();
    let mut stepper = Stepper::new(algebra, i, mode, caps)?;
    let mut supports = vec![vec![i]];
    for _ in 0..k_max {
        let next = stepper.step(supports.last().expect("nonempty"))?;
        supports.push(next);
    }
    let cover_step = supports.iter().position(|s| s.len() == n);
    Ok(SupportTrace {
        i,
        mode,
        supports,
        cover_step,
    })
}

/// Least `k <= k_cap` with `S_k` the full index set.
pub fn cover_time(
    algebra: &EvolutionAlgebra,
    i: usize,
    mode: SupportMode,
    k_cap: usize,
    caps: &ResourceCaps,
) -> Result<Option<usize>> {
    let n = algebra.dim();
    let mut stepper = Stepper::new(algebra, i, mode, caps)?;
    let mut support = vec![i];
    for k in 0..=k_cap {
        if support.len() == n {
            return Ok(Some(k));
        }
        if k < k_cap {
            let next = stepper.step(&support)?;
            if mode == SupportMode::Combinatorial && next == support {
                return Ok(None);
            }
            support = next;
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistencyRecord {
    pub i: usize,
    pub mode: SupportMode,
    /// `occurrence[k]`: `i` lies in `S_k`.
    pub occurrence: Vec<bool>,
    pub first_absence: Option<usize>,
    /// Occurrence over the evaluated window: `{0} ∪ [2, k_max]` by default,
    /// every `k` when `strict`.
    pub eventually_persistent_up_to_kmax: bool,
    pub strict: bool,
}

pub fn persistency(
    algebra: &EvolutionAlgebra,
    i: usize,
    k_max: usize,
    mode: SupportMode,
    strict: bool,
    caps: &ResourceCaps,
) -> Result<PersistencyRecord> {
    let trace = support_trace(algebra, i, k_max, mode, caps)?;
    Ok(persistency_from_trace(&trace, strict))
}

pub fn persistency_from_trace(trace: &SupportTrace, strict: bool) -> PersistencyRecord {
    let occurrence: Vec<bool> = trace
        .supports
        .iter()
        .map(|s| s.binary_search(&trace.i).is_ok())
        .collect();
    let first_absence = occurrence.iter().position(|o| !o);
    let verdict = occurrence
        .iter()
        .enumerate()
        .filter(|(k, _)| strict || *k != 1)
        .all(|(_, o)| *o);
    PersistencyRecord {
        i: trace.i,
        mode: trace.mode,
        occurrence,
        first_absence,
        eventually_persistent_up_to_kmax: verdict,
        strict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HierarchyReport {
    pub k_max: usize,
    pub persistent: Vec<usize>,
    pub transient: Vec<usize>,
    pub records: Vec<PersistencyRecord>,
    /// Every generator persistent.
    pub trivial: bool,
}

/// First index of the tail on which the hierarchy tests occurrence.
pub fn hierarchy_tail_start(k_max: usize) -> usize {
    (k_max / 2).max(2)
}

/// Classifies generators by eventual occurrence in exact mode: `e_i` is
/// persistent when it occurs in `S_k` for every `k` in the tail
/// `[max(2, k_max/2), k_max]` of the window `[2, k_max]`.
pub fn hierarchy_report(algebra: &EvolutionAlgebra, k_max: usize, caps: &ResourceCaps) -> Result<HierarchyReport> {
    if k_max < 2 {
        return Err(Error::InvalidArgument("hierarchy window needs k_max >= 2".into()));
    }
    let mut persistent = Vec::new();
    let mut transient = Vec::new();
    let mut records = Vec::with_capacity(algebra.dim());
    for i in 0..algebra.dim() {
        let record = persistency(algebra, i, k_max, SupportMode::Exact, false, caps)?;
        if record.occurrence[hierarchy_tail_start(k_max)..].iter().all(|o| *o) {
            persistent.push(i);
        } else {
            transient.push(i);
        }
        records.push(record);
    }
    Ok(HierarchyReport {
        k_max,
        trivial: transient.is_empty(),
        persistent,
        transient,
        records,
    })
}

/// Graph distance between generators; `None` when they lie in different
/// components.
pub fn algebraic_distance(algebra: &EvolutionAlgebra, i: usize, j: usize) -> Result<Option<usize>> {
    underlying_graph(algebra).distance(i, j)
}

/// Window length for support and persistency runs:
/// `ceil((d/h) ln n) + 4` with exact `h`, else `2 * diameter + 4`, else
/// `n + 4` for disconnected graphs.
pub fn default_k_max(algebra: &EvolutionAlgebra, caps: &ResourceCaps) -> usize {
    let graph = underlying_graph(algebra);
    let n = graph.n();
    let d = graph.max_degree() as f64;
    if let Ok(cert) = cheeger_exact(&graph, caps) {
        match cert.value {
            CheegerValue::Infinite => return 4,
            CheegerValue::Finite(h) => {
                if let Some(h) = h.to_f64().filter(|h| *h > 0.0) {
                    return ((d / h) * (n as f64).ln()).ceil() as usize + 4;
                }
            }
        }
    }
    match graph.diameter() {
        Some(diam) => 2 * diam + 4,
        None => n + 4,
    }
}

/// Steps `k` violating `|S_{k+1}| >= (1 + h/d) |S_k|` while `|S_k| <= n/2`,
/// checked exactly as `d |S_{k+1}| >= (d + h) |S_k|`.
pub fn step_growth_violations(trace: &SupportTrace, n: usize, d: usize, h: &BigRational) -> Vec<usize> {
    let d_q = BigRational::from_integer(d.into());
    trace
        .supports
        .windows(2)
        .enumerate()
        .filter(|(_, w)| 2 * w[0].len() <= n)
        .filter(|(_, w)| {
            let lhs = &d_q * BigRational::from_integer(w[1].len().into());
            let rhs = (&d_q + h) * BigRational::from_integer(w[0].len().into());
            lhs < rhs
        })
        .map(|(k, _)| k)
        .collect()
}

/// True when each support contains the previous one.
pub fn is_nested(trace: &SupportTrace) -> bool {
    trace
        .supports
        .windows(2)
        .all(|w| w[0].iter().all(|v| w[1].binary_search(v).is_ok()))
}

/// Indices `k` at which exact and combinatorial supports differ.
pub fn support_divergence(exact: &SupportTrace, combinatorial: &SupportTrace) -> Vec<usize> {
    exact
        .supports
        .iter()
        .zip(&combinatorial.supports)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(k, _)| k)
        .collect()
}

/// Whether the diagonal is nonzero everywhere (every generator squares onto
/// itself).
pub fn has_full_diagonal(algebra: &EvolutionAlgebra) -> bool {
    (0..algebra.dim()).all(|i| !algebra.entry_is_zero(i, i))
}
