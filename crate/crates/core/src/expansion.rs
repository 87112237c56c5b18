//! Cheeger constants: exact enumeration with witness cuts, the spectral
//! sandwich, the h-EEA certificate and finite-sample family reports.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::EvolutionAlgebra;
use crate::caps::{ResourceCaps, MAX_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational};
use crate::graph::{underlying_graph, SimpleGraph};
use crate::spectral::{symmetric_eigenvalues, RealMatrix};

/// A Cheeger constant: an exact rational, or `+inf` for graphs with at most
/// one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CheegerValue {
    Finite(BigRational),
    Infinite,
}

impl CheegerValue {
    pub fn from_ratio(num: u64, den: u64) -> Self {
        CheegerValue::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            CheegerValue::Finite(q) => Some(q),
            CheegerValue::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CheegerValue::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
            CheegerValue::Infinite => f64::INFINITY,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            CheegerValue::Finite(q) => q > &BigRational::zero(),
            CheegerValue::Infinite => true,
        }
    }

    /// `self >= threshold`.
    pub fn at_least(&self, threshold: &BigRational) -> bool {
        match self {
            CheegerValue::Finite(q) => q >= threshold,
            CheegerValue::Infinite => true,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(CheegerValue::Infinite),
            other => parse_rational(other).map(CheegerValue::Finite),
        }
    }
}

impl PartialOrd for CheegerValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CheegerValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CheegerValue::Finite(a), CheegerValue::Finite(b)) => a.cmp(b),
            (CheegerValue::Finite(_), CheegerValue::Infinite) => Ordering::Less,
            (CheegerValue::Infinite, CheegerValue::Finite(_)) => Ordering::Greater,
            (CheegerValue::Infinite, CheegerValue::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for CheegerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheegerValue::Finite(q) => f.write_str(&format_rational(q)),
            CheegerValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for CheegerValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CheegerValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CheegerValue::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheegerMethod {
    ExactEnumeration,
    SpectralBoundsOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheegerCertificate {
    #[serde(rename = "h")]
    pub value: CheegerValue,
    /// Sorted vertex set achieving the minimum; empty when `h = +inf`.
    pub witness: Vec<usize>,
    pub method: CheegerMethod,
}

impl CheegerCertificate {
    /// Recomputes `|E(W)| / |W|` from the witness and compares.
    pub fn verify(&self, graph: &SimpleGraph) -> Result<bool> {
        match &self.value {
            CheegerValue::Infinite => Ok(graph.n() <= 1 && self.witness.is_empty()),
            CheegerValue::Finite(q) => {
                if self.witness.is_empty() || 2 * self.witness.len() > graph.n() {
                    return Ok(false);
                }
                let e = edge_boundary(graph, &self.witness)?.len();
                Ok(CheegerValue::from_ratio(e as u64, self.witness.len() as u64)
                    == CheegerValue::Finite(q.clone()))
            }
        }
    }
}

fn membership(graph: &SimpleGraph, set: &[usize]) -> Result<Vec<bool>> {
    let n = graph.n();
    let mut inside = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        inside[v] = true;
    }
    Ok(inside)
}

/// Edges with exactly one endpoint in `set`, as sorted `(min, max)` pairs.
pub fn edge_boundary(graph: &SimpleGraph, set: &[usize]) -> Result<Vec<(usize, usize)>> {
    let inside = membership(graph, set)?;
    Ok(graph
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| inside[a] != inside[b])
        .collect())
}

/// Best cut found so far: boundary size, subset size, mask.
#[derive(Clone, Copy, Debug)]
struct Cut {
    boundary: u64,
    size: u64,
    mask: u64,
}

impl Cut {
    /// Ratio first, then size, then lexicographic order on the sorted sets.
    fn better_than(&self, other: &Cut) -> bool {
        let lhs = self.boundary as u128 * other.size as u128;
        let rhs = other.boundary as u128 * self.size as u128;
        match lhs.cmp(&rhs) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match self.size.cmp(&other.size) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let diff = self.mask ^ other.mask;
                    diff != 0 && self.mask & (diff & diff.wrapping_neg()) != 0
                }
            },
        }
    }

    fn pick(a: Option<Cut>, b: Option<Cut>) -> Option<Cut> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

fn boundary_of(adj: &[u64], mask: u64) -> u64 {
    let mut e = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        e += (adj[v] & !mask).count_ones() as u64;
    }
    e
}

/// Visits every subset whose high bits equal `prefix` via a Gray code over
/// the low `low_bits` bits, keeping the best admissible cut.
fn scan_chunk(adj: &[u64], half: u64, low_bits: u32, prefix: u64) -> Option<Cut> {
    let mut mask = prefix << low_bits;
    let mut boundary = boundary_of(adj, mask);
    let mut best: Option<Cut> = None;
    let consider = |mask: u64, boundary: u64, best: &mut Option<Cut>| {
        let size = mask.count_ones() as u64;
        if size >= 1 && size <= half {
            let cut = Cut {
                boundary,
                size,
                mask,
            };
            if best.map_or(true, |b| cut.better_than(&b)) {
                *best = Some(cut);
            }
        }
    };
    consider(mask, boundary, &mut best);
    for step in 1u64..(1u64 << low_bits) {
        let v = step.trailing_zeros() as usize;
        let bit = 1u64 << v;
        let deg = adj[v].count_ones() as u64;
        if mask & bit == 0 {
            let inner = (adj[v] & mask).count_ones() as u64;
            boundary = boundary + deg - 2 * inner;
            mask |= bit;
        } else {
            mask &= !bit;
            let inner = (adj[v] & mask).count_ones() as u64;
            boundary = boundary + 2 * inner - deg;
        }
        consider(mask, boundary, &mut best);
    }
    best
}

/// Exact Cheeger constant by enumerating every nonempty subset of size at
/// most `n/2`. Parallel over high-bit prefixes; the result (value and
/// witness) does not depend on scheduling.
pub fn cheeger_exact(graph: &SimpleGraph, caps: &ResourceCaps) -> Result<CheegerCertificate> {
    let n = graph.n();
    let cap = caps.enumeration.min(MAX_ENUMERATION_CAP);
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    if n <= 1 {
        return Ok(CheegerCertificate {
            value: CheegerValue::Infinite,
            witness: Vec::new(),
            method: CheegerMethod::ExactEnumeration,
        });
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &u| m | (1u64 << u)))
        .collect();
    let half = (n / 2) as u64;
    let high_bits = n.saturating_sub(14).min(10) as u32;
    let low_bits = n as u32 - high_bits;
    let best = (0..1u64 << high_bits)
        .into_par_iter()
        .map(|prefix| scan_chunk(&adj, half, low_bits, prefix))
        .reduce(|| None, Cut::pick)
        .ok_or_else(|| Error::Internal("no admissible subset".into()))?;
    let witness: Vec<usize> = (0..n).filter(|&v| best.mask >> v & 1 == 1).collect();
    Ok(CheegerCertificate {
        value: CheegerValue::from_ratio(best.boundary, best.size),
        witness,
        method: CheegerMethod::ExactEnumeration,
    })
}

/// Two-sided spectral estimate `(d - l2)/2 <= h <= sqrt(2 d (d - l2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBounds {
    pub lower: f64,
    pub upper: f64,
    pub d: usize,
    pub lambda2: f64,
}

pub fn cheeger_spectral_bounds(graph: &SimpleGraph) -> Result<SpectralBounds> {
    let d = graph.is_regular().ok_or(Error::NotRegular)?;
    if graph.n() < 2 {
        return Err(Error::InvalidArgument(
            "spectral bounds need at least two vertices".into(),
        ));
    }
    let spectrum = symmetric_eigenvalues(&RealMatrix::adjacency(graph))?;
    let lambda2 = spectrum.lambda2().expect("n >= 2");
    // Clamp rounding noise on disconnected graphs where l2 = d.
    let gap = (d as f64 - lambda2).max(0.0);
    Ok(SpectralBounds {
        lower: gap / 2.0,
        upper: (2.0 * d as f64 * gap).sqrt(),
        d,
        lambda2,
    })
}

/// Outcome of an h-EEA test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EeaCertificate {
    pub holds: bool,
    pub threshold: CheegerValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cheeger: Option<CheegerCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<SpectralBounds>,
}

/// `h(Gamma) >= h` for the algebra's underlying graph. Falls back to the
/// spectral sandwich above the enumeration cap; straddling bounds are an
/// [`Error::Inconclusive`], and graphs with no bounds available (non-regular)
/// propagate the cap error.
pub fn is_h_eea(algebra: &EvolutionAlgebra, h: &BigRational, caps: &ResourceCaps) -> Result<EeaCertificate> {
    is_h_eea_graph(&underlying_graph(algebra), h, caps)
}

pub fn is_h_eea_graph(graph: &SimpleGraph, h: &BigRational, caps: &ResourceCaps) -> Result<EeaCertificate> {
    let threshold = CheegerValue::Finite(h.clone());
    match cheeger_exact(graph, caps) {
        Ok(cert) => Ok(EeaCertificate {
            holds: cert.value.at_least(h),
            threshold,
            cheeger: Some(cert),
            bounds: None,
        }),
        Err(cap_error @ Error::EnumerationCapExceeded { .. }) => {
            let bounds = match cheeger_spectral_bounds(graph) {
                Ok(b) => b,
                Err(Error::NotRegular) => return Err(cap_error),
                Err(other) => return Err(other),
            };
            let hf = h.to_f64().unwrap_or(f64::NAN);
            let holds = if bounds.lower >= hf {
                true
            } else if bounds.upper < hf {
                false
            } else {
                return Err(Error::Inconclusive {
                    lower: bounds.lower,
                    upper: bounds.upper,
                    threshold: format_rational(h),
                });
            };
            Ok(EeaCertificate {
                holds,
                threshold,
                cheeger: None,
                bounds: Some(bounds),
            })
        }
        Err(other) => Err(other),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyMember {
    pub n: usize,
    pub max_degree: usize,
    /// Exact value when enumeration fits the cap.
    pub h: Option<CheegerValue>,
    /// Spectral lower bound used when `h` is not exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_lower: Option<f64>,
}

impl FamilyMember {
    fn h_estimate(&self) -> Option<f64> {
        self.h.as_ref().map(CheegerValue::to_f64).or(self.h_lower)
    }
}

/// Finite-sample check of the three expander-family conditions. Conditions
/// (ii) and (iii) are trend heuristics comparing the first and second halves
/// of the sample; they describe the sample, not an infinite family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub members: Vec<FamilyMember>,
    /// (i) sizes strictly increase.
    pub growing: bool,
    /// (ii) max degree in the second half does not exceed the first half.
    pub bounded_degree: bool,
    /// (iii) every h is positive and the second-half minimum is not below
    /// the first-half minimum.
    pub expansion_bounded_below: bool,
    pub inf_h: Option<CheegerValue>,
    pub verdict: String,
}

pub fn eea_family_report(algebras: &[EvolutionAlgebra], caps: &ResourceCaps) -> Result<FamilyReport> {
    if algebras.len() < 2 {
        return Err(Error::InvalidArgument(
            "a family report needs at least two algebras".into(),
        ));
    }
    let mut members = Vec::with_capacity(algebras.len());
    for algebra in algebras {
        let graph = underlying_graph(algebra);
        let (h, h_lower) = match cheeger_exact(&graph, caps) {
            Ok(cert) => (Some(cert.value), None),
            Err(Error::EnumerationCapExceeded { .. }) => {
                (None, cheeger_spectral_bounds(&graph).ok().map(|b| b.lower))
            }
            Err(e) => return Err(e),
        };
        members.push(FamilyMember {
            n: graph.n(),
            max_degree: graph.max_degree(),
            h,
            h_lower,
        });
    }
    let mid = members.len() / 2;
    let (first, second) = members.split_at(mid);
    let growing = members.windows(2).all(|w| w[0].n < w[1].n);
    let max_deg = |s: &[FamilyMember]| s.iter().map(|m| m.max_degree).max().unwrap_or(0);
    let bounded_degree = max_deg(second) <= max_deg(first);
    let min_h = |s: &[FamilyMember]| {
        s.iter()
            .map(|m| m.h_estimate().unwrap_or(0.0))
            .fold(f64::INFINITY, f64::min)
    };
    let all_positive = members
        .iter()
        .all(|m| m.h_estimate().map_or(false, |v| v > 0.0));
    let expansion_bounded_below = all_positive && min_h(second) >= min_h(first);
    let inf_h = members.iter().filter_map(|m| m.h.clone()).min();
    let mut failures = Vec::new();
    if !growing {
        failures.push("(i) sizes do not grow");
    }
    if !bounded_degree {
        failures.push("(ii) degree unbounded");
    }
    if !expansion_bounded_below {
        failures.push("(iii) h -> 0 trend");
    }
    let verdict = if failures.is_empty() {
        "expander-like on this sample".to_string()
    } else {
        format!("not expander-like: {}", failures.join("; "))
    };
    Ok(FamilyReport {
        members,
        growing,
        bounded_degree,
        expansion_bounded_below,
        inf_h,
        verdict,
    })
}
