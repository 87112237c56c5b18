//! The Lubotzky–Phillips–Sarnak generating set in `PSL_2(F_q)` or
//! `PGL_2(F_q)`.

use serde::Serialize;

use super::groups::{mod_pow, pgl2, psl2, FiniteGroup, GeneratingSet, MatrixQuotient};
use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::field::is_prime;

/// Quadruples `(a, b, c, d)` with `a` odd and positive, `b, c, d` even and
/// `a^2 + b^2 + c^2 + d^2 = p`.
pub fn lps_quadruples(p: u64) -> Vec<[i64; 4]> {
    let bound = ((p as f64).sqrt().ceil() as i64) + 1;
    let p = p as i64;
    let mut out = Vec::new();
    for a in (1..=bound).step_by(2) {
        for b in (-bound..=bound).filter(|v| v % 2 == 0) {
            for c in (-bound..=bound).filter(|v| v % 2 == 0) {
                for d in (-bound..=bound).filter(|v| v % 2 == 0) {
                    if a * a + b * b + c * c + d * d == p {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Legendre symbol test: `a` is a nonzero square modulo the odd prime `q`.
pub fn is_quadratic_residue(a: u64, q: u64) -> bool {
    a % q != 0 && mod_pow(a, (q - 1) / 2, q) == 1
}

fn sqrt_mod(a: u64, q: u64) -> Option<u64> {
    (1..q).find(|x| x * x % q == a % q)
}

#[derive(Clone, Debug, Serialize)]
pub struct LpsData {
    pub p: u64,
    pub q: u64,
    pub quotient: MatrixQuotient,
    /// `i` with `i^2 = -1 (mod q)`.
    pub sqrt_minus_one: u64,
    pub quadruples: Vec<[i64; 4]>,
    /// The matrix of each quadruple, reduced modulo `q` (before projective
    /// normalization).
    pub matrices: Vec<[u64; 4]>,
    #[serde(skip)]
    pub group: FiniteGroup,
    pub generators: GeneratingSet,
}

/// Builds the `p + 1` LPS generators. The target is `PSL_2(F_q)` when `p`
/// is a square modulo `q` (matrices rescaled by `1/sqrt(p)` to determinant
/// one) and `PGL_2(F_q)` otherwise.
pub fn lps_generating_set(p: u64, q: u64, caps: &ResourceCaps) -> Result<LpsData> {
    for (name, v) in [("p", p), ("q", q)] {
        if !is_prime(v) || v % 4 != 1 {
            return Err(Error::LpsParameters(format!(
                "{name} = {v} must be a prime congruent to 1 mod 4"
            )));
        }
    }
    if p == q {
        return Err(Error::LpsParameters("p and q must be distinct".into()));
    }
    let quadruples = lps_quadruples(p);
    if quadruples.len() as u64 != p + 1 {
        return Err(Error::Internal(format!(
            "found {} quadruples for p = {p}, expected {}",
            quadruples.len(),
            p + 1
        )));
    }
    let i = sqrt_mod(q - 1, q).ok_or_else(|| Error::Internal("no square root of -1".into()))?;
    let residue = is_quadratic_residue(p, q);
    let (group, quotient, scale) = if residue {
        let root = sqrt_mod(p, q).expect("p is a residue");
        let scale = crate::field::mod_inverse(root, q);
        (psl2(q, caps)?, MatrixQuotient::Psl, scale)
    } else {
        (pgl2(q, caps)?, MatrixQuotient::Pgl, 1)
    };
    let qi = q as i64;
    let ii = i as i64;
    let matrices: Vec<[u64; 4]> = quadruples
        .iter()
        .map(|&[a, b, c, d]| {
            [a + ii * b, c + ii * d, -c + ii * d, a - ii * b].map(|v| v.rem_euclid(qi) as u64)
        })
        .collect();
    let mut indices = Vec::with_capacity(matrices.len());
    for m in &matrices {
        let scaled = m.map(|v| (v * scale % q) as i64);
        let idx = group.find_matrix(scaled).ok_or_else(|| {
            Error::Internal(format!("LPS matrix {m:?} not found in the target group"))
        })?;
        indices.push(idx);
    }
    let mut distinct = indices.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != indices.len() {
        return Err(Error::Internal("LPS generators are not distinct".into()));
    }
    let generators = GeneratingSet::new(&group, &indices)?;
    Ok(LpsData {
        p,
        q,
        quotient,
        sqrt_minus_one: i,
        quadruples,
        matrices,
        group,
        generators,
    })
}
