//! Dense symmetric eigensolver and the spectral quantities built on it:
//! gaps, Perron data, Ramanujan certification and the Alon–Boppana floor.
//!
//! The solver is Householder tridiagonalization followed by implicit-shift
//! QL. Up to [`FULL_SPECTRUM_LIMIT`] the full eigensystem is computed and
//! every eigenpair is residual-checked. Above it only the two largest and two
//! smallest eigenvalues are reported: the tridiagonal eigenvalues come from
//! QL without vectors, and each reported value gets an eigenvector by inverse
//! iteration on the tridiagonal matrix, mapped back through the stored
//! reflectors and residual-checked against the original matrix.
//!
//! Everything runs single-threaded in a fixed order, so identical input bits
//! give bit-identical spectra.

use serde::{Deserialize, Serialize};

use crate::algebra::EvolutionAlgebra;
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::graph::{underlying_graph, SimpleGraph};

/// Largest dimension solved in full.
pub const FULL_SPECTRUM_LIMIT: usize = 512;
/// Required relative residual `||Av - lambda v|| / ||A||_F`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Relative symmetry tolerance on input matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Tolerance used for Perron, multiplicity and Ramanujan comparisons.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

const MAX_QL_ITERATIONS: usize = 60;

/// A dense real square matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        RealMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = RealMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(m)
    }

    /// Structural matrix as reals. Rationals are rounded to the nearest
    /// double; prime-field algebras are rejected.
    pub fn from_algebra(algebra: &EvolutionAlgebra) -> Result<Self> {
        if let FieldDescriptor::Prime(_) = algebra.field() {
            return Err(Error::PrimeFieldUnsupported("real spectrum"));
        }
        let n = algebra.dim();
        let mut m = RealMatrix::zeros(n);
        for (i, j, v) in algebra.nonzeros() {
            m.data[i * n + j] = v.to_f64().expect("ordered field");
        }
        Ok(m)
    }

    pub fn adjacency(graph: &SimpleGraph) -> Self {
        let n = graph.n();
        let mut m = RealMatrix::zeros(n);
        for &(a, b) in graph.edges() {
            m.data[a * n + b] = 1.0;
            m.data[b * n + a] = 1.0;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// Kronecker product with row-major pair indexing.
    pub fn kronecker(&self, other: &RealMatrix) -> RealMatrix {
        let (n1, n2) = (self.n, other.n);
        let mut out = RealMatrix::zeros(n1 * n2);
        for i in 0..n1 {
            for k in 0..n1 {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n2 {
                    for l in 0..n2 {
                        out.set(i * n2 + j, k * n2 + l, a * other.get(j, l));
                    }
                }
            }
        }
        out
    }

    fn check_symmetric(&self) -> Result<()> {
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let tol = SYMMETRY_TOLERANCE * self.frobenius_norm();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Sorted (non-increasing) real eigenvalues of a symmetric matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Max over computed eigenpairs of `||Av - lambda v|| / ||A||_F`.
    #[serde(rename = "residual")]
    pub residual_bound: f64,
    /// When set, `eigenvalues` holds only `[l_1, l_2, l_{n-1}, l_n]`.
    pub partial: bool,
    pub n: usize,
}

impl Spectrum {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda2(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.eigenvalues[1])
    }

    pub fn smallest(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn second_smallest(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.eigenvalues[self.eigenvalues.len() - 2])
    }

    /// `lambda_1 - lambda_2`.
    pub fn spectral_gap(&self) -> Result<f64> {
        self.lambda2()
            .map(|l2| self.lambda1() - l2)
            .ok_or_else(|| Error::InvalidArgument("spectral gap needs n >= 2".into()))
    }

    /// Groups equal eigenvalues: `(value, multiplicity)` with values within
    /// `1e-9 * max(1, |lambda|)` merged. Only meaningful for full spectra.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &v in &self.eigenvalues {
            match out.last_mut() {
                Some((rep, count)) if (*rep - v).abs() <= EIGEN_TOLERANCE * rep.abs().max(1.0) => {
                    *count += 1
                }
                _ => out.push((v, 1)),
            }
        }
        out
    }

    /// Largest `|lambda|` over the computed eigenvalues with `||lambda| - d| > tol`.
    /// Largest `|lambda|` over eigenvalues with `|lambda| != d`.
    fn max_nontrivial(&self, d: f64) -> Result<Option<f64>> {
        let trivial = |v: f64| (v.abs() - d).abs() <= EIGEN_TOLERANCE;
        if !self.partial {
            return Ok(self
                .eigenvalues
                .iter()
                .filter(|v| !trivial(**v))
                .map(|v| v.abs())
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v)))));
        }
        let [l1, l2, ln1, ln] = <[f64; 4]>::try_from(self.eigenvalues.as_slice())
            .map_err(|_| Error::Internal("partial spectrum must hold four values".into()))?;
        if !trivial(l1) {
            return Ok(Some(l1.abs().max(ln.abs())));
        }
        if trivial(l2) {
            return Err(Error::PartialSpectrum(
                "the top eigenvalue is repeated; lambda_3 was not computed".into(),
            ));
        }
        let low = if trivial(ln) {
            if trivial(ln1) {
                return Err(Error::PartialSpectrum(
                    "-d is repeated; lambda_{n-2} was not computed".into(),
                ));
            }
            ln1
        } else {
            ln
        };
        Ok(Some(l2.abs().max(low.abs())))
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    /// `off[k] = T[k][k+1]`; `off[n-1] = 0`.
    off: Vec<f64>,
    /// Householder vectors `(u, beta)` with `H_k = I - beta u u^T` acting on
    /// indices `k+1..n`.
    reflectors: Vec<(Vec<f64>, f64)>,
}

impl Tridiagonal {
    fn reduce(a: &RealMatrix) -> Tridiagonal {
        let n = a.n;
        let mut m = a.data.clone();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n];
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        for k in 0..n.saturating_sub(2) {
            let len = n - k - 1;
            diag[k] = m[k * n + k];
            let mut u: Vec<f64> = (0..len).map(|r| m[(k + 1 + r) * n + k]).collect();
            let norm = norm2(&u);
            if norm == 0.0 {
                off[k] = 0.0;
                reflectors.push((u, 0.0));
                continue;
            }
            let alpha = if u[0] > 0.0 { -norm } else { norm };
            u[0] -= alpha;
            let beta = 2.0 / dot(&u, &u);
            off[k] = alpha;
            let p: Vec<f64> = (0..len)
                .map(|r| {
                    let start = (k + 1 + r) * n + k + 1;
                    beta * dot(&m[start..start + len], &u)
                })
                .collect();
            let half = 0.5 * beta * dot(&u, &p);
            let w: Vec<f64> = p.iter().zip(&u).map(|(pi, ui)| pi - half * ui).collect();
            for r in 0..len {
                let start = (k + 1 + r) * n + k + 1;
                let (ur, wr) = (u[r], w[r]);
                for ((x, uc), wc) in m[start..start + len].iter_mut().zip(&u).zip(&w) {
                    *x -= ur * wc + wr * uc;
                }
            }
            reflectors.push((u, beta));
        }
        if n >= 2 {
            diag[n - 2] = m[(n - 2) * n + n - 2];
            diag[n - 1] = m[(n - 1) * n + n - 1];
            off[n - 2] = m[(n - 1) * n + n - 2];
        } else if n == 1 {
            diag[0] = m[0];
        }
        Tridiagonal {
            diag,
            off,
            reflectors,
        }
    }

    /// `Q = H_0 H_1 ... H_{n-3}` as a dense row-major matrix.
    fn accumulate(&self, n: usize) -> Vec<f64> {
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            q[i * n + i] = 1.0;
        }
        let mut s = vec![0.0; n];
        for (k, (u, beta)) in self.reflectors.iter().enumerate().rev() {
            if *beta == 0.0 {
                continue;
            }
            s.iter_mut().for_each(|x| *x = 0.0);
            for (r, ur) in u.iter().enumerate() {
                let row = &q[(k + 1 + r) * n..(k + 2 + r) * n];
                for (sc, qc) in s.iter_mut().zip(row) {
                    *sc += ur * qc;
                }
            }
            for (r, ur) in u.iter().enumerate() {
                let f = beta * ur;
                let row = &mut q[(k + 1 + r) * n..(k + 2 + r) * n];
                for (qc, sc) in row.iter_mut().zip(&s) {
                    *qc -= f * sc;
                }
            }
        }
        q
    }

    /// `y <- Q y`.
    fn apply_q(&self, y: &mut [f64]) {
        for (k, (u, beta)) in self.reflectors.iter().enumerate().rev() {
            if *beta == 0.0 {
                continue;
            }
            let tail = &mut y[k + 1..];
            let s = beta * dot(u, tail);
            for (t, ur) in tail.iter_mut().zip(u) {
                *t -= s * ur;
            }
        }
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. When `z` is given
/// (row-major `n x n`) the rotations are accumulated into its columns.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NonConvergence(format!(
                    "QL iteration stalled at index {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Solves `(T - shift I) x = b` by Gaussian elimination with partial
/// pivoting; zero pivots are nudged to `tiny`.
fn solve_shifted_tridiagonal(
    diag: &[f64],
    off: &[f64],
    shift: f64,
    b: &mut [f64],
    tiny: f64,
) -> Vec<f64> {
    let n = diag.len();
    let mut u0: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut u1: Vec<f64> = (0..n).map(|i| if i + 1 < n { off[i] } else { 0.0 }).collect();
    let mut u2 = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let low = off[i];
        if low.abs() > u0[i].abs() {
            // Swap rows i and i+1, then eliminate.
            let (r0, r1, r2) = (low, u0[i + 1], if i + 2 < n { u1[i + 1] } else { 0.0 });
            let (o0, o1, o2) = (u0[i], u1[i], u2[i]);
            let mult = o0 / r0;
            u0[i] = r0;
            u1[i] = r1;
            u2[i] = r2;
            u0[i + 1] = o1 - mult * r1;
            if i + 2 < n {
                u1[i + 1] = o2 - mult * r2;
            }
            b.swap(i, i + 1);
            b[i + 1] -= mult * b[i];
        } else {
            if u0[i] == 0.0 {
                u0[i] = tiny;
            }
            let mult = low / u0[i];
            u0[i + 1] -= mult * u1[i];
            if i + 2 < n {
                u1[i + 1] -= mult * u2[i];
            }
            b[i + 1] -= mult * b[i];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        if u0[i] == 0.0 {
            u0[i] = tiny;
        }
        let mut acc = b[i];
        if i + 1 < n {
            acc -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= u2[i] * x[i + 2];
        }
        x[i] = acc / u0[i];
    }
    x
}

fn inverse_iteration(t: &Tridiagonal, shift: f64) -> Vec<f64> {
    let n = t.diag.len();
    let scale = t
        .diag
        .iter()
        .chain(&t.off)
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    // Fixed, irregular start vector so no eigenvector is missed by symmetry.
    let mut y: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i * 7919 + 13) % 101) as f64 / 101.0)
        .collect();
    for _ in 0..4 {
        let mut rhs = y.clone();
        y = solve_shifted_tridiagonal(&t.diag, &t.off, shift, &mut rhs, tiny);
        let norm = norm2(&y);
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        y.iter_mut().for_each(|v| *v /= norm);
    }
    y
}

fn relative_residual(a: &RealMatrix, v: &[f64], lambda: f64, scale: f64) -> f64 {
    let av = a.mul_vec(v);
    let norm_v = norm2(v).max(f64::MIN_POSITIVE);
    let r: f64 = av
        .iter()
        .zip(v)
        .map(|(x, y)| (x - lambda * y).powi(2))
        .sum::<f64>()
        .sqrt();
    r / (norm_v * scale)
}

/// Eigenvalues of a symmetric matrix (full up to [`FULL_SPECTRUM_LIMIT`],
/// partial above).
pub fn symmetric_eigenvalues(matrix: &RealMatrix) -> Result<Spectrum> {
    symmetric_eigenvalues_with_limit(matrix, FULL_SPECTRUM_LIMIT)
}

/// As [`symmetric_eigenvalues`] with an explicit full-solve limit.
pub fn symmetric_eigenvalues_with_limit(matrix: &RealMatrix, full_limit: usize) -> Result<Spectrum> {
    if matrix.n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if matrix.n <= full_limit.max(4) {
        symmetric_eigensystem(matrix).map(|(s, _)| s)
    } else {
        partial_spectrum(matrix)
    }
}

/// Full eigen-decomposition; eigenvectors are returned as columns matching
/// the descending eigenvalue order.
pub fn symmetric_eigensystem(matrix: &RealMatrix) -> Result<(Spectrum, Vec<Vec<f64>>)> {
    matrix.check_symmetric()?;
    let n = matrix.n;
    let t = Tridiagonal::reduce(matrix);
    let mut z = t.accumulate(n);
    let (mut d, mut e) = (t.diag.clone(), t.off.clone());
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
    let scale = matrix.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut vectors = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for &j in &order {
        let v: Vec<f64> = (0..n).map(|k| z[k * n + j]).collect();
        residual = residual.max(relative_residual(matrix, &v, d[j], scale));
        vectors.push(v);
    }
    let spectrum = Spectrum {
        eigenvalues: order.iter().map(|&j| d[j]).collect(),
        residual_bound: residual,
        partial: false,
        n,
    };
    check_residual(&spectrum)?;
    Ok((spectrum, vectors))
}

fn partial_spectrum(matrix: &RealMatrix) -> Result<Spectrum> {
    matrix.check_symmetric()?;
    let n = matrix.n;
    let t = Tridiagonal::reduce(matrix);
    let (mut d, mut e) = (t.diag.clone(), t.off.clone());
    tridiagonal_ql(&mut d, &mut e, None)?;
    d.sort_by(|a, b| b.total_cmp(a));
    let picked = [d[0], d[1], d[n - 2], d[n - 1]];
    let scale = matrix.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut residual: f64 = 0.0;
    for &lambda in &picked {
        let mut v = inverse_iteration(&t, lambda);
        t.apply_q(&mut v);
        residual = residual.max(relative_residual(matrix, &v, lambda, scale));
    }
    let spectrum = Spectrum {
        eigenvalues: picked.to_vec(),
        residual_bound: residual,
        partial: true,
        n,
    };
    check_residual(&spectrum)?;
    Ok(spectrum)
}

fn check_residual(spectrum: &Spectrum) -> Result<()> {
    if spectrum.residual_bound.is_finite() && spectrum.residual_bound <= RESIDUAL_TOLERANCE {
        Ok(())
    } else {
        Err(Error::NonConvergence(format!(
            "relative residual {:e} exceeds {:e}",
            spectrum.residual_bound, RESIDUAL_TOLERANCE
        )))
    }
}

/// Spectrum of an algebra's structural matrix.
pub fn algebra_spectrum(algebra: &EvolutionAlgebra) -> Result<Spectrum> {
    symmetric_eigenvalues(&RealMatrix::from_algebra(algebra)?)
}

pub fn spectral_gap(spectrum: &Spectrum) -> Result<f64> {
    spectrum.spectral_gap()
}

/// Perron data for the adjacency spectrum of a d-regular graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronVerdict {
    pub d: usize,
    pub lambda1: f64,
    pub lambda2: Option<f64>,
    /// `|lambda_1 - d| <= 1e-9`.
    pub top_is_degree: bool,
    /// `lambda_1 - lambda_2 > 1e-9`.
    pub simple: bool,
}

impl PerronVerdict {
    pub fn holds(&self) -> bool {
        self.top_is_degree && self.simple
    }
}

pub fn perron_data(spectrum: &Spectrum, d: usize) -> PerronVerdict {
    let lambda1 = spectrum.lambda1();
    let lambda2 = spectrum.lambda2();
    PerronVerdict {
        d,
        lambda1,
        lambda2,
        top_is_degree: (lambda1 - d as f64).abs() <= EIGEN_TOLERANCE,
        simple: lambda2.map_or(true, |l2| lambda1 - l2 > EIGEN_TOLERANCE),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamanujanVerdict {
    pub ramanujan: bool,
    pub d: usize,
    /// `2 sqrt(d - 1)`.
    pub bound: f64,
    /// Largest `|lambda|` among eigenvalues with `|lambda| != d`.
    pub max_nontrivial: Option<f64>,
    /// `bound - max_nontrivial` (or `bound` when every eigenvalue is trivial).
    pub margin: f64,
    pub partial: bool,
}

/// Ramanujan certification for symmetric graphicable d-regular algebras.
pub fn is_ramanujan(algebra: &EvolutionAlgebra) -> Result<RamanujanVerdict> {
    if let FieldDescriptor::Prime(_) = algebra.field() {
        return Err(Error::PrimeFieldUnsupported("Ramanujan certification"));
    }
    if !algebra.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !algebra.is_graphicable() {
        return Err(Error::NotGraphicable);
    }
    let graph = underlying_graph(algebra);
    let d = graph.is_regular().ok_or(Error::NotRegular)?;
    let spectrum = symmetric_eigenvalues(&RealMatrix::adjacency(&graph))?;
    ramanujan_from_spectrum(&spectrum, d)
}

pub fn ramanujan_from_spectrum(spectrum: &Spectrum, d: usize) -> Result<RamanujanVerdict> {
    let bound = 2.0 * (d.saturating_sub(1) as f64).sqrt();
    let max_nontrivial = spectrum.max_nontrivial(d as f64)?;
    let worst = max_nontrivial.unwrap_or(0.0);
    Ok(RamanujanVerdict {
        ramanujan: worst <= bound + EIGEN_TOLERANCE,
        d,
        bound,
        max_nontrivial,
        margin: bound - worst,
        partial: spectrum.partial,
    })
}

/// `2 sqrt(d - 1)`.
pub fn alon_boppana_floor(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument("Alon-Boppana floor needs d >= 2".into()));
    }
    Ok(2.0 * ((d - 1) as f64).sqrt())
}

/// `(d - 2 sqrt(d - 1)) / 2`, the expansion guaranteed by the Ramanujan bound.
pub fn ramanujan_expansion_lower(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(
            "Ramanujan expansion bound needs d >= 2".into(),
        ));
    }
    Ok((d as f64 - 2.0 * ((d - 1) as f64).sqrt()) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_algebra, cycle_algebra, direct_sum, petersen_algebra};

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn spectrum_of(a: &EvolutionAlgebra) -> Spectrum {
        algebra_spectrum(a).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        let s = spectrum_of(&complete_algebra(4, Q).unwrap());
        assert_close(&s.eigenvalues, &[3.0, -1.0, -1.0, -1.0], 1e-12);
        assert!((s.spectral_gap().unwrap() - 4.0).abs() < 1e-12);
        assert!(!s.partial);
    }

    #[test]
    fn petersen_spectrum_and_gap() {
        let s = spectrum_of(&petersen_algebra(Q).unwrap());
        assert!((s.lambda2().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(s.clusters().iter().map(|c| c.1).collect::<Vec<_>>(), vec![1, 5, 4]);
        assert!((s.spectral_gap().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let m = RealMatrix::from_rows(&[vec![-2.5]]).unwrap();
        let s = symmetric_eigenvalues(&m).unwrap();
        assert_eq!(s.eigenvalues, vec![-2.5]);
        assert!(s.spectral_gap().is_err());
    }

    #[test]
    fn edgeless_gap_is_zero() {
        let s = symmetric_eigenvalues(&RealMatrix::zeros(2)).unwrap();
        assert_eq!(s.spectral_gap().unwrap(), 0.0);
    }

    #[test]
    fn asymmetric_and_prime_inputs_rejected() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(symmetric_eigenvalues(&m), Err(Error::NotSymmetric)));
        let a = cycle_algebra(3, FieldDescriptor::prime(3).unwrap()).unwrap();
        assert!(matches!(
            algebra_spectrum(&a),
            Err(Error::PrimeFieldUnsupported(_))
        ));
    }

    #[test]
    fn perron_checks() {
        let p = perron_data(&spectrum_of(&petersen_algebra(Q).unwrap()), 3);
        assert!(p.holds());
        let c6 = perron_data(&spectrum_of(&cycle_algebra(6, Q).unwrap()), 2);
        assert!(c6.holds());
        let two_triangles =
            direct_sum(&cycle_algebra(3, Q).unwrap(), &cycle_algebra(3, Q).unwrap()).unwrap();
        let v = perron_data(&spectrum_of(&two_triangles), 2);
        assert!(v.top_is_degree);
        assert!(!v.simple);
        assert!(!v.holds());
    }

    #[test]
    fn ramanujan_examples() {
        let p = is_ramanujan(&petersen_algebra(Q).unwrap()).unwrap();
        assert!(p.ramanujan);
        assert!((p.margin - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-9);
        assert!(is_ramanujan(&complete_algebra(4, Q).unwrap()).unwrap().ramanujan);
        let c8 = is_ramanujan(&cycle_algebra(8, Q).unwrap()).unwrap();
        assert!(c8.ramanujan);
        assert!((c8.max_nontrivial.unwrap() - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn ramanujan_preconditions_named() {
        let weighted = cycle_algebra(4, Q)
            .unwrap()
            .rescale_basis(&[
                crate::algebra::q(2, 1),
                crate::algebra::q(1, 1),
                crate::algebra::q(1, 1),
                crate::algebra::q(1, 1),
            ])
            .unwrap();
        assert!(matches!(is_ramanujan(&weighted), Err(Error::NotSymmetric)));
        let doubled = EvolutionAlgebra::from_int_matrix(Q, &[vec![0, 2], vec![2, 0]]).unwrap();
        assert!(matches!(is_ramanujan(&doubled), Err(Error::NotGraphicable)));
        let path = EvolutionAlgebra::from_int_matrix(
            Q,
            &[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]],
        )
        .unwrap();
        assert!(matches!(is_ramanujan(&path), Err(Error::NotRegular)));
    }

    #[test]
    fn reference_values() {
        assert!((alon_boppana_floor(3).unwrap() - 2.828_427_124_746_19).abs() < 1e-12);
        assert_eq!(alon_boppana_floor(2).unwrap(), 2.0);
        assert!((alon_boppana_floor(6).unwrap() - 2.0 * 5f64.sqrt()).abs() < 1e-12);
        assert!((ramanujan_expansion_lower(3).unwrap() - 0.085_786_437_626_905).abs() < 1e-12);
        assert_eq!(ramanujan_expansion_lower(2).unwrap(), 0.0);
        assert!((ramanujan_expansion_lower(6).unwrap() - 0.763_932_022_500_21).abs() < 1e-12);
        assert!(alon_boppana_floor(1).is_err());
        assert!(ramanujan_expansion_lower(0).is_err());
    }

    #[test]
    fn partial_path_matches_full_path() {
        let a = cycle_algebra(40, Q).unwrap();
        let m = RealMatrix::from_algebra(&a).unwrap();
        let full = symmetric_eigenvalues_with_limit(&m, 1000).unwrap();
        let partial = symmetric_eigenvalues_with_limit(&m, 8).unwrap();
        assert!(partial.partial);
        let e = &full.eigenvalues;
        assert_close(
            &partial.eigenvalues,
            &[e[0], e[1], e[e.len() - 2], e[e.len() - 1]],
            1e-12,
        );
        assert!(partial.residual_bound <= RESIDUAL_TOLERANCE);
    }

    #[test]
    fn partial_ramanujan_handles_bipartite_bottom() {
        // C_40 is bipartite: -2 is trivial and lambda_{n-1} decides.
        let a = cycle_algebra(40, Q).unwrap();
        let m = RealMatrix::from_algebra(&a).unwrap();
        let partial = symmetric_eigenvalues_with_limit(&m, 8).unwrap();
        let verdict = ramanujan_from_spectrum(&partial, 2).unwrap();
        let expected = 2.0 * (2.0 * std::f64::consts::PI / 40.0).cos();
        assert!((verdict.max_nontrivial.unwrap() - expected).abs() < 1e-12);
        assert!(verdict.ramanujan);
    }

    #[test]
    fn deterministic_bits() {
        let m = RealMatrix::from_algebra(&petersen_algebra(Q).unwrap()).unwrap();
        let a = symmetric_eigenvalues(&m).unwrap();
        let b = symmetric_eigenvalues(&m).unwrap();
        assert_eq!(
            a.eigenvalues.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.eigenvalues.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let m = RealMatrix::from_algebra(&petersen_algebra(Q).unwrap()).unwrap();
        let (_, vecs) = symmetric_eigensystem(&m).unwrap();
        for i in 0..vecs.len() {
            for j in 0..vecs.len() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&vecs[i], &vecs[j]) - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn spectrum_json_shape() {
        let s = symmetric_eigenvalues(&RealMatrix::from_rows(&[vec![2.0]]).unwrap()).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["eigenvalues"], serde_json::json!([2.0]));
        assert_eq!(v["partial"], serde_json::json!(false));
        assert!(v["residual"].is_number());
    }
}
