//! Markov evolution algebras: stochasticity, irreducibility, period, and
//! mixing simulations against the decay bounds.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::EvolutionAlgebra;
use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::expansion::{cheeger_exact, CheegerValue};
use crate::field::{FieldDescriptor, Scalar};
use crate::graph::{digraph, underlying_graph};
use crate::spectral::{symmetric_eigenvalues, RealMatrix};

/// Row/column sum tolerance for real-field algebras.
pub const REAL_STOCHASTIC_TOLERANCE: f64 = 1e-10;
/// Largest dimension accepted by [`mixing_simulation_exact`].
pub const EXACT_MIXING_LIMIT: usize = 64;

fn require_ordered(algebra: &EvolutionAlgebra) -> Result<()> {
    if let FieldDescriptor::Prime(_) = algebra.field() {
        return Err(Error::PrimeFieldUnsupported("stochasticity"));
    }
    Ok(())
}

fn sums_are_one(algebra: &EvolutionAlgebra, columns: bool) -> bool {
    let n = algebra.dim();
    let field = algebra.field();
    let mut sums = vec![Scalar::zero(field); n];
    for (i, j, v) in algebra.nonzeros() {
        let idx = if columns { j } else { i };
        sums[idx] = &sums[idx] + v;
    }
    sums.iter().all(|s| match s {
        Scalar::Real(x) => (x - 1.0).abs() <= REAL_STOCHASTIC_TOLERANCE,
        other => other.is_one(),
    })
}

/// Nonnegative entries and unit row sums.
pub fn is_markov(algebra: &EvolutionAlgebra) -> Result<bool> {
    require_ordered(algebra)?;
    Ok(algebra.is_nonnegative() && sums_are_one(algebra, false))
}

/// Markov with unit column sums as well.
pub fn is_doubly_stochastic(algebra: &EvolutionAlgebra) -> Result<bool> {
    Ok(is_markov(algebra)? && sums_are_one(algebra, true))
}

/// Strong connectivity of the positive-entry digraph.
pub fn is_irreducible(algebra: &EvolutionAlgebra) -> Result<bool> {
    if !is_markov(algebra)? {
        return Err(Error::NotMarkov);
    }
    Ok(digraph(algebra).is_strongly_connected())
}

/// Period of an irreducible chain: the gcd of `level(u) + 1 - level(v)`
/// over arcs `u -> v`, with BFS levels from state 0. `None` when reducible.
pub fn period(algebra: &EvolutionAlgebra) -> Result<Option<usize>> {
    if !is_irreducible(algebra)? {
        return Ok(None);
    }
    let g = digraph(algebra);
    let n = g.n();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in g.out_neighbors(u) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut gcd = 0usize;
    for arc in g.arcs() {
        let diff = (level[arc.from] + 1).abs_diff(level[arc.to]);
        gcd = gcd.gcd(&diff);
    }
    // A single state without a loop cannot occur in a Markov chain; the
    // zero guard only protects the arithmetic.
    Ok(Some(gcd.max(1)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingTrace {
    pub i: usize,
    /// `||S^k e_i - pi||_1` for `k = 0..=k_max`, `pi` uniform.
    pub distances: Vec<f64>,
}

impl MixingTrace {
    /// Least `k` with distance at most `eps`.
    pub fn empirical_tmix(&self, eps: f64) -> Option<usize> {
        self.distances.iter().position(|d| *d <= eps)
    }
}

fn check_doubly_stochastic(algebra: &EvolutionAlgebra) -> Result<()> {
    if is_doubly_stochastic(algebra)? {
        Ok(())
    } else {
        Err(Error::NotDoublyStochastic)
    }
}

/// Iterates `v_{k+1} = S v_k` from `v_0 = e_i` in double precision, with
/// `(S v)_j = sum_l a_jl v_l`.
pub fn mixing_simulation(algebra: &EvolutionAlgebra, i: usize, k_max: usize) -> Result<MixingTrace> {
    check_doubly_stochastic(algebra)?;
    let n = algebra.dim();
    if i >= n {
        return Err(Error::VertexOutOfRange { vertex: i, n });
    }
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|j| {
            algebra
                .row(j)
                .iter()
                .map(|(l, a)| (*l, a.to_f64().expect("ordered field")))
                .collect()
        })
        .collect();
    let pi = 1.0 / n as f64;
    let distance = |v: &[f64]| v.iter().map(|x| (x - pi).abs()).sum::<f64>();
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    let mut distances = Vec::with_capacity(k_max + 1);
    distances.push(distance(&v));
    for _ in 0..k_max {
        v = rows
            .iter()
            .map(|row| row.iter().map(|(l, a)| a * v[*l]).sum())
            .collect();
        distances.push(distance(&v));
    }
    Ok(MixingTrace { i, distances })
}

/// Exact rational distances for rational algebras with `n <= 64`.
pub fn mixing_simulation_exact(algebra: &EvolutionAlgebra, i: usize, k_max: usize) -> Result<Vec<BigRational>> {
    if algebra.field() != FieldDescriptor::Rational {
        return Err(Error::InvalidArgument("exact mixing needs a rational algebra".into()));
    }
    let n = algebra.dim();
    if n > EXACT_MIXING_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "exact mixing is limited to n <= {EXACT_MIXING_LIMIT}"
        )));
    }
    check_doubly_stochastic(algebra)?;
    if i >= n {
        return Err(Error::VertexOutOfRange { vertex: i, n });
    }
    let pi = BigRational::new(1.into(), n.into());
    let distance = |v: &[BigRational]| {
        v.iter()
            .fold(BigRational::zero(), |acc, x| acc + (x - &pi).abs())
    };
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    let mut out = vec![distance(&v)];
    for _ in 0..k_max {
        v = (0..n)
            .map(|j| {
                algebra.row(j).iter().fold(BigRational::zero(), |acc, (l, a)| match a {
                    Scalar::Rational(q) => acc + q * &v[*l],
                    _ => unreachable!("rational algebra"),
                })
            })
            .collect();
        out.push(distance(&v));
    }
    Ok(out)
}

/// `n (1 - h^2 / (2 d^2))^k`.
pub fn paper_mixing_bound(n: usize, h: &BigRational, d: usize, k: usize) -> f64 {
    let h = h.to_f64().unwrap_or(f64::NAN);
    let d = d as f64;
    n as f64 * (1.0 - h * h / (2.0 * d * d)).powi(k as i32)
}

/// `mu* = max(|mu_2|, |mu_n|)` from a symmetric stochastic matrix.
pub fn second_largest_modulus(algebra: &EvolutionAlgebra) -> Result<f64> {
    let spectrum = symmetric_eigenvalues(&RealMatrix::from_algebra(algebra)?)?;
    Ok(spectrum
        .lambda2()
        .map_or(0.0, |mu2| mu2.abs().max(spectrum.smallest().abs())))
}

/// `sqrt(n) mu*^k`.
pub fn corrected_mixing_bound(mu_star: f64, n: usize, k: usize) -> f64 {
    (n as f64).sqrt() * mu_star.powi(k as i32)
}

/// `(2 d^2 / h^2) ln(n / eps)`, clamped at zero.
pub fn tmix_bound(n: usize, h: &BigRational, d: usize, eps: f64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if !h.is_positive() {
        return Err(Error::InvalidArgument("mixing-time bound needs h > 0".into()));
    }
    let h = h.to_f64().unwrap_or(f64::NAN);
    let d = d as f64;
    Ok((2.0 * d * d / (h * h) * (n as f64 / eps).ln()).max(0.0))
}

/// A mixing run together with both bounds and the empirical mixing time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport {
    pub i: usize,
    pub n: usize,
    pub d: usize,
    pub h: Option<CheegerValue>,
    pub distances: Vec<f64>,
    /// Present when `h` is known and positive.
    pub paper_bound: Option<Vec<f64>>,
    /// Present for symmetric matrices.
    pub corrected_bound: Option<Vec<f64>>,
    pub mu_star: Option<f64>,
    pub epsilon: f64,
    pub empirical_tmix: Option<usize>,
    pub tmix_bound: Option<f64>,
    pub period: Option<usize>,
    /// Steps where the distance exceeds `paper_bound`.
    pub paper_violations: Vec<usize>,
    /// Steps where the distance exceeds the corrected bound by more than 1e-8.
    pub corrected_violations: Vec<usize>,
}

impl MixingReport {
    pub fn periodic(&self) -> bool {
        self.period.map_or(false, |p| p > 1)
    }

    pub fn first_paper_violation(&self) -> Option<usize> {
        self.paper_violations.first().copied()
    }

    /// CSV rows `k,distance,paper_bound,corrected_bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,distance,paper_bound,corrected_bound\n");
        for (k, dist) in self.distances.iter().enumerate() {
            let cell = |v: &Option<Vec<f64>>| v.as_ref().map(|b| b[k].to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{k},{dist},{},{}\n",
                cell(&self.paper_bound),
                cell(&self.corrected_bound)
            ));
        }
        out
    }
}

/// Runs [`mixing_simulation`] and evaluates both bounds along the trace.
/// `h` and `d` come from the underlying graph (`d` its maximum degree).
pub fn mixing_report(
    algebra: &EvolutionAlgebra,
    i: usize,
    k_max: usize,
    eps: f64,
    caps: &ResourceCaps,
) -> Result<MixingReport> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let trace = mixing_simulation(algebra, i, k_max)?;
    let graph = underlying_graph(algebra);
    let n = graph.n();
    let d = graph.max_degree();
    let h = match cheeger_exact(&graph, caps) {
        Ok(cert) => Some(cert.value),
        Err(Error::EnumerationCapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let h_finite = h
        .as_ref()
        .and_then(|v| v.as_rational())
        .filter(|q| q.is_positive() && d > 0);
    let paper_bound =
        h_finite.map(|h| (0..=k_max).map(|k| paper_mixing_bound(n, h, d, k)).collect::<Vec<_>>());
    let mu_star = if algebra.is_symmetric() {
        Some(second_largest_modulus(algebra)?)
    } else {
        None
    };
    let corrected_bound = mu_star.map(|mu| {
        (0..=k_max)
            .map(|k| corrected_mixing_bound(mu, n, k))
            .collect::<Vec<_>>()
    });
    let violations = |bound: &Option<Vec<f64>>, slack: f64| -> Vec<usize> {
        bound.as_ref().map_or_else(Vec::new, |b| {
            trace
                .distances
                .iter()
                .zip(b)
                .enumerate()
                .filter(|(_, (dist, bd))| **dist > **bd + slack)
                .map(|(k, _)| k)
                .collect()
        })
    };
    let paper_violations = violations(&paper_bound, 0.0);
    let corrected_violations = violations(&corrected_bound, 1e-8);
    Ok(MixingReport {
        i,
        n,
        d,
        empirical_tmix: trace.empirical_tmix(eps),
        tmix_bound: h_finite.map(|h| tmix_bound(n, h, d, eps)).transpose()?,
        period: period(algebra)?,
        h,
        distances: trace.distances,
        paper_bound,
        corrected_bound,
        mu_star,
        epsilon: eps,
        paper_violations,
        corrected_violations,
    })
}
