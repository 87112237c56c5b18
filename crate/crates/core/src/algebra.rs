//! Evolution algebras: a natural basis `e_0..e_{n-1}` with `e_i e_j = 0` for
//! `i != j` and `e_i^2 = sum_k a_ik e_k`.
//!
//! The structural matrix is kept as sorted sparse rows. Cayley and LPS
//! algebras have a handful of nonzeros per row at thousands of dimensions,
//! while every query here iterates nonzeros anyway; `entry(i, j)` gives the
//! dense view.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Scalar};

/// Relative tolerance for support tests over ℝ.
pub const REAL_SUPPORT_TOLERANCE: f64 = 1e-12;
/// Relative pivot tolerance for rank over ℝ.
pub const REAL_RANK_TOLERANCE: f64 = 1e-10;
/// Relative tolerance for symmetry tests over ℝ.
pub const REAL_SYMMETRY_TOLERANCE: f64 = 1e-12;

/// An element `sum_k alpha_k e_k` written in the natural basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    coeffs: Vec<Scalar>,
}

impl Element {
    pub fn zero(field: FieldDescriptor, n: usize) -> Self {
        Element {
            coeffs: vec![Scalar::zero(field); n],
        }
    }

    pub fn basis(field: FieldDescriptor, n: usize, i: usize) -> Self {
        let mut e = Element::zero(field, n);
        e.coeffs[i] = Scalar::one(field);
        e
    }

    /// Builds an element from coefficients; all must share one field.
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument("element needs at least one coefficient".into()));
        };
        let field = first.field();
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                expected: field,
                found: bad.field(),
            });
        }
        Ok(Element { coeffs })
    }

    /// Integer coefficients mapped into `field`.
    pub fn from_ints(field: FieldDescriptor, values: &[i64]) -> Self {
        Element {
            coeffs: values.iter().map(|&v| Scalar::from_i64(field, v)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.compatible(other)?;
        Ok(Element {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Result<Element> {
        if c.field() != self.field() {
            return Err(Error::FieldMismatch {
                expected: self.field(),
                found: c.field(),
            });
        }
        Ok(Element {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        })
    }

    /// Largest coefficient bit length (ℚ only; 0 otherwise).
    pub fn max_bit_len(&self) -> u64 {
        self.coeffs.iter().map(Scalar::bit_len).max().unwrap_or(0)
    }

    fn compatible(&self, other: &Element) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                expected: self.field(),
                found: other.field(),
            });
        }
        Ok(())
    }
}

/// A finite-dimensional evolution algebra with its structural matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionAlgebra {
    n: usize,
    field: FieldDescriptor,
    rows: Vec<Vec<(usize, Scalar)>>,
}

/// On-disk form: 0-based `[row, col, "value"]` triplets, zeros omitted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldDescriptor,
    pub n: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl EvolutionAlgebra {
    /// The algebra with all products zero.
    pub fn zero(field: FieldDescriptor, n: usize) -> Result<Self> {
        Self::from_triplets(field, n, std::iter::empty())
    }

    /// Builds from `(row, col, value)` triplets; zero values are dropped and
    /// repeated positions are rejected.
    pub fn from_triplets<I>(field: FieldDescriptor, n: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for (i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: i.max(j),
                    n,
                });
            }
            if v.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: v.field(),
                });
            }
            if !v.is_zero() {
                rows[i].push((j, v));
            }
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|(j, _)| *j);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate entry at ({i}, {})",
                    w[0].0
                )));
            }
        }
        Ok(EvolutionAlgebra { n, field, rows })
    }

    /// Builds from a dense row-major matrix.
    pub fn from_dense(field: FieldDescriptor, matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let triplets = matrix
            .into_iter()
            .enumerate()
            .flat_map(|(i, row)| row.into_iter().enumerate().map(move |(j, v)| (i, j, v)));
        Self::from_triplets(field, n, triplets)
    }

    /// Dense integer matrix mapped into `field`.
    pub fn from_int_matrix(field: FieldDescriptor, matrix: &[Vec<i64>]) -> Result<Self> {
        Self::from_dense(
            field,
            matrix
                .iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(field, v)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Nonzero entries of row `i` as `(column, value)`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.rows[i]
    }

    /// Structural constant `a_ij`.
    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.rows[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|pos| self.rows[i][pos].1.clone())
            .unwrap_or_else(|_| Scalar::zero(self.field))
    }

    pub fn entry_is_zero(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search_by_key(&j, |(c, _)| *c).is_err()
    }

    /// All nonzero entries in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Copy with every diagonal constant replaced by `value`.
    pub fn with_diagonal(&self, value: &Scalar) -> Result<Self> {
        let triplets = self
            .nonzeros()
            .filter(|(i, j, _)| i != j)
            .map(|(i, j, v)| (i, j, v.clone()))
            .chain((0..self.n).map(|i| (i, i, value.clone())))
            .collect::<Vec<_>>();
        Self::from_triplets(self.field, self.n, triplets)
    }

    fn check_element(&self, x: &Element) -> Result<()> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.dim(),
            });
        }
        if x.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: x.field(),
            });
        }
        Ok(())
    }

    pub fn basis_element(&self, i: usize) -> Result<Element> {
        if i >= self.n {
            return Err(Error::VertexOutOfRange { vertex: i, n: self.n });
        }
        Ok(Element::basis(self.field, self.n, i))
    }

    /// `x * y = sum_i x_i y_i e_i^2`.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_element(x)?;
        self.check_element(y)?;
        let weights: Vec<Scalar> = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a * b).collect();
        Ok(self.combine_squares(&weights))
    }

    /// `sum_i w_i e_i^2`.
    fn combine_squares(&self, weights: &[Scalar]) -> Element {
        let mut out = Element::zero(self.field, self.n);
        for (i, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (k, a) in &self.rows[i] {
                out.coeffs[*k] = &out.coeffs[*k] + &(w * a);
            }
        }
        out
    }

    pub fn square(&self, x: &Element) -> Result<Element> {
        self.check_element(x)?;
        let weights: Vec<Scalar> = x.coeffs.iter().map(Scalar::square).collect();
        Ok(self.combine_squares(&weights))
    }

    /// Principal power `x^m = x^{m-1} * x`, `m >= 1`.
    pub fn principal_power(&self, x: &Element, m: u32) -> Result<Element> {
        if m < 1 {
            return Err(Error::InvalidArgument("principal power needs m >= 1".into()));
        }
        self.check_element(x)?;
        let mut acc = x.clone();
        for _ in 1..m {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// Plenary power `x^[k] = (x^[k-1])^2` with `x^[0] = x`.
    pub fn plenary_power(&self, x: &Element, k: u32, caps: &ResourceCaps) -> Result<Element> {
        Ok(self
            .plenary_sequence(x, k, caps)?
            .pop()
            .expect("sequence holds x^[0]"))
    }

    /// `[x^[0], x^[1], ..., x^[k_max]]`, aborting once a rational coefficient
    /// outgrows `caps.coefficient_bits`.
    pub fn plenary_sequence(
        &self,
        x: &Element,
        k_max: u32,
        caps: &ResourceCaps,
    ) -> Result<Vec<Element>> {
        self.check_element(x)?;
        let mut seq = Vec::with_capacity(k_max as usize + 1);
        seq.push(x.clone());
        for _ in 0..k_max {
            let next = self.square(seq.last().expect("nonempty"))?;
            let bits = next.max_bit_len();
            if bits > caps.coefficient_bits {
                return Err(Error::CoefficientCapExceeded {
                    bits,
                    cap: caps.coefficient_bits,
                });
            }
            seq.push(next);
        }
        Ok(seq)
    }

    /// The evolution operator: the linear map with `E(e_i) = e_i^2`.
    pub fn evolution_operator_apply(&self, x: &Element) -> Result<Element> {
        self.check_element(x)?;
        Ok(self.combine_squares(&x.coeffs))
    }

    /// Indices with nonzero coefficient. Over ℝ a coefficient counts when
    /// `|alpha_k| > REAL_SUPPORT_TOLERANCE * max_j |alpha_j|`.
    pub fn support(&self, x: &Element) -> Result<Vec<usize>> {
        self.support_with_tolerance(x, REAL_SUPPORT_TOLERANCE)
    }

    pub fn support_with_tolerance(&self, x: &Element, rel_tol: f64) -> Result<Vec<usize>> {
        self.check_element(x)?;
        Ok(element_support(x, rel_tol))
    }

    fn real_scale(&self) -> f64 {
        self.nonzeros()
            .map(|(_, _, v)| v.abs_f64())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    /// `a_ij = a_ji` for all `i != j`.
    pub fn is_symmetric(&self) -> bool {
        let tol = REAL_SYMMETRY_TOLERANCE * self.real_scale();
        self.nonzeros().filter(|(i, j, _)| i != j).all(|(i, j, v)| {
            let mirror = self.entry(j, i);
            match (v, &mirror) {
                (Scalar::Real(a), Scalar::Real(b)) => (a - b).abs() <= tol,
                _ => *v == mirror,
            }
        })
    }

    /// Off-diagonal constants in {0, 1} and a zero diagonal.
    pub fn is_graphicable(&self) -> bool {
        self.is_graphicable_with(false)
    }

    /// As [`is_graphicable`](Self::is_graphicable); `allow_loops` skips the
    /// zero-diagonal requirement.
    pub fn is_graphicable_with(&self, allow_loops: bool) -> bool {
        self.nonzeros()
            .all(|(i, j, v)| if i == j { allow_loops } else { v.is_one() })
    }

    /// Every structural constant is nonnegative (ordered fields only).
    pub fn is_nonnegative(&self) -> bool {
        self.nonzeros()
            .all(|(_, _, v)| v.is_negative() == Some(false))
    }

    /// Rank of the structural matrix.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldDescriptor::Rational => rank_integer_rows(self.integer_rows()),
            FieldDescriptor::Prime(p) => rank_mod_p(self.residue_rows(p), p),
            FieldDescriptor::Real => rank_real(self.real_rows()),
        }
    }

    /// `rank(A) = n`. Over ℚ a full rank modulo a large prime settles the
    /// question at once (it forces `det A != 0`); otherwise the exact
    /// fraction-free elimination decides.
    pub fn is_nonsingular(&self) -> bool {
        if self.field == FieldDescriptor::Rational {
            const LARGE_PRIME: u64 = 4_294_967_291;
            if let Some(rows) = self.integer_rows_mod(LARGE_PRIME) {
                if rank_mod_p(rows, LARGE_PRIME) == self.n {
                    return true;
                }
            }
        }
        self.rank() == self.n
    }

    /// Rows scaled to integers by their denominators' lcm.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| {
                let lcm = self.rows[i].iter().fold(BigInt::one(), |acc, (_, v)| match v {
                    Scalar::Rational(q) => acc.lcm(q.denom()),
                    _ => acc,
                });
                let mut row = vec![BigInt::zero(); self.n];
                for (j, v) in &self.rows[i] {
                    if let Scalar::Rational(q) = v {
                        row[*j] = q.numer() * (&lcm / q.denom());
                    }
                }
                row
            })
            .collect()
    }

    fn integer_rows_mod(&self, p: u64) -> Option<Vec<Vec<u64>>> {
        let modulus = BigInt::from(p);
        let rows = self.integer_rows();
        Some(
            rows.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|v| {
                            let r = v.mod_floor(&modulus);
                            r.try_into().unwrap_or(0u64)
                        })
                        .collect()
                })
                .collect(),
        )
    }

    fn residue_rows(&self, p: u64) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![0u64; self.n]; self.n];
        for (i, j, v) in self.nonzeros() {
            if let Scalar::Prime { residue, .. } = v {
                rows[i][j] = *residue % p;
            }
        }
        rows
    }

    fn real_rows(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.n]; self.n];
        for (i, j, v) in self.nonzeros() {
            rows[i][j] = v.to_f64().unwrap_or(f64::NAN);
        }
        rows
    }

    /// Rescaled basis with constants `a'_ij = a_ij * lambda_j / lambda_i^2`
    /// (the natural basis `e_i / lambda_i`). The zero pattern is unchanged.
    pub fn rescale_basis(&self, lambdas: &[Scalar]) -> Result<Self> {
        if lambdas.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: lambdas.len(),
            });
        }
        for (i, l) in lambdas.iter().enumerate() {
            if l.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field,
                    found: l.field(),
                });
            }
            if l.is_zero() {
                return Err(Error::ZeroScaling(i));
            }
        }
        let inv_sq: Vec<Scalar> = lambdas
            .iter()
            .map(|l| l.square().inv())
            .collect::<Result<_>>()?;
        let triplets: Vec<_> = self
            .nonzeros()
            .map(|(i, j, v)| (i, j, &(v * &lambdas[j]) * &inv_sq[i]))
            .collect();
        Self::from_triplets(self.field, self.n, triplets)
    }

    /// Relabels the basis by `sigma` (`sigma[i]` is the new index of `e_i`):
    /// `a'_{sigma(i), sigma(j)} = a_ij`.
    pub fn permute_basis(&self, sigma: &[usize]) -> Result<Self> {
        validate_permutation(sigma, self.n)?;
        let triplets: Vec<_> = self
            .nonzeros()
            .map(|(i, j, v)| (sigma[i], sigma[j], v.clone()))
            .collect();
        Self::from_triplets(self.field, self.n, triplets)
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            field: self.field,
            n: self.n,
            entries: self
                .nonzeros()
                .map(|(i, j, v)| (i, j, v.to_string()))
                .collect(),
        }
    }

    pub fn from_json(json: &AlgebraJson) -> Result<Self> {
        let triplets = json
            .entries
            .iter()
            .map(|(i, j, s)| Ok((*i, *j, Scalar::parse(json.field, s)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_triplets(json.field, json.n, triplets)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: AlgebraJson = serde_json::from_str(s)?;
        Self::from_json(&json)
    }
}

pub(crate) fn element_support(x: &Element, rel_tol: f64) -> Vec<usize> {
    if x.field() == FieldDescriptor::Real {
        let max = x.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
        if max == 0.0 {
            return Vec::new();
        }
        x.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs_f64() > rel_tol * max)
            .map(|(k, _)| k)
            .collect()
    } else {
        x.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect()
    }
}

pub(crate) fn validate_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    Ok(())
}

/// Bareiss fraction-free elimination; every intermediate entry is an exact
/// minor, so the divisions below are exact.
fn rank_integer_rows(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = crate::field::mod_inverse(m[rank][col], p);
        for r in rank + 1..rows {
            let factor = (m[r][col] as u128 * inv as u128 % p as u128) as u64;
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                let sub = (factor as u128 * m[rank][c] as u128 % p as u128) as u64;
                m[r][c] = (m[r][c] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn rank_real(mut m: Vec<Vec<f64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = REAL_RANK_TOLERANCE * scale;
    let mut rank = 0;
    for col in 0..cols {
        let (pivot, best) = (rank..rows)
            .map(|r| (r, m[r][col].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if rank >= rows || best <= tol {
            continue;
        }
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            let factor = m[r][col] / m[rank][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..cols {
                m[r][c] -= factor * m[rank][c];
            }
        }
        rank += 1;
    }
    rank
}

/// `num/den` as a rational scalar.
pub fn q(num: i64, den: i64) -> Scalar {
    Scalar::Rational(BigRational::new(num.into(), den.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_algebra, cycle_algebra};

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn f2() -> FieldDescriptor {
        FieldDescriptor::prime(2).unwrap()
    }

    #[test]
    fn distinct_basis_elements_annihilate() {
        let a = cycle_algebra(5, Q).unwrap();
        let prod = a
            .multiply(&a.basis_element(0).unwrap(), &a.basis_element(1).unwrap())
            .unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn square_of_generator_in_triangle() {
        let a = cycle_algebra(3, Q).unwrap();
        let e0 = a.basis_element(0).unwrap();
        assert_eq!(a.multiply(&e0, &e0).unwrap(), Element::from_ints(Q, &[0, 1, 1]));
    }

    #[test]
    fn square_of_sum_in_triangle() {
        let a = cycle_algebra(3, Q).unwrap();
        let x = Element::from_ints(Q, &[1, 1, 0]);
        assert_eq!(a.multiply(&x, &x).unwrap(), Element::from_ints(Q, &[1, 1, 2]));
    }

    #[test]
    fn principal_powers() {
        let a = cycle_algebra(3, Q).unwrap();
        let e0 = a.basis_element(0).unwrap();
        assert_eq!(a.principal_power(&e0, 1).unwrap(), e0);
        assert_eq!(
            a.principal_power(&e0, 2).unwrap(),
            a.multiply(&e0, &e0).unwrap()
        );
        assert!(a.principal_power(&e0, 3).unwrap().is_zero());
        assert!(a.principal_power(&e0, 0).is_err());
    }

    #[test]
    fn plenary_powers_over_q_and_f2() {
        let caps = ResourceCaps::default();
        let a = cycle_algebra(3, Q).unwrap();
        let e0 = a.basis_element(0).unwrap();
        assert_eq!(a.plenary_power(&e0, 0, &caps).unwrap(), e0);
        let p2 = a.plenary_power(&e0, 2, &caps).unwrap();
        assert_eq!(p2, Element::from_ints(Q, &[2, 1, 1]));
        assert_eq!(a.support(&p2).unwrap(), vec![0, 1, 2]);

        let b = cycle_algebra(3, f2()).unwrap();
        let e0 = b.basis_element(0).unwrap();
        let p2 = b.plenary_power(&e0, 2, &caps).unwrap();
        assert_eq!(p2, Element::from_ints(f2(), &[0, 1, 1]));
        assert_eq!(b.support(&p2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn plenary_bit_cap_is_an_error() {
        let a = complete_algebra(4, Q).unwrap().with_diagonal(&q(1, 1)).unwrap();
        let caps = ResourceCaps {
            coefficient_bits: 64,
            ..ResourceCaps::default()
        };
        let err = a
            .plenary_power(&a.basis_element(0).unwrap(), 12, &caps)
            .unwrap_err();
        assert!(matches!(err, Error::CoefficientCapExceeded { cap: 64, .. }));
    }

    #[test]
    fn support_of_zero_is_empty() {
        let a = cycle_algebra(4, FieldDescriptor::Real).unwrap();
        assert!(a
            .support(&Element::zero(FieldDescriptor::Real, 4))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn real_support_uses_relative_tolerance() {
        let a = cycle_algebra(3, FieldDescriptor::Real).unwrap();
        let x = Element::from_coeffs(vec![
            Scalar::Real(1e20),
            Scalar::Real(1e9),
            Scalar::Real(-3.0),
        ])
        .unwrap();
        assert_eq!(a.support(&x).unwrap(), vec![0, 1]);
    }

    #[test]
    fn evolution_operator_is_linear_not_plenary() {
        let caps = ResourceCaps::default();
        let a = cycle_algebra(3, Q).unwrap();
        let two_e0 = Element::from_ints(Q, &[2, 0, 0]);
        assert_eq!(
            a.evolution_operator_apply(&a.basis_element(0).unwrap()).unwrap(),
            Element::from_ints(Q, &[0, 1, 1])
        );
        assert_eq!(
            a.evolution_operator_apply(&two_e0).unwrap(),
            Element::from_ints(Q, &[0, 2, 2])
        );
        assert_eq!(
            a.plenary_power(&two_e0, 1, &caps).unwrap(),
            Element::from_ints(Q, &[0, 4, 4])
        );
        assert!(a
            .evolution_operator_apply(&Element::zero(Q, 3))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let a = cycle_algebra(3, Q).unwrap();
        let short = Element::from_ints(Q, &[1, 0]);
        assert!(matches!(
            a.multiply(&short, &short),
            Err(Error::DimensionMismatch { .. })
        ));
        let wrong = Element::from_ints(FieldDescriptor::Real, &[1, 0, 0]);
        assert!(matches!(
            a.multiply(&wrong, &wrong),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn symmetry_and_graphicability() {
        assert!(cycle_algebra(6, Q).unwrap().is_symmetric());
        let one_way = EvolutionAlgebra::from_int_matrix(Q, &[vec![0, 1], vec![0, 0]]).unwrap();
        assert!(!one_way.is_symmetric());
        assert!(EvolutionAlgebra::zero(Q, 1).unwrap().is_symmetric());

        assert!(cycle_algebra(5, Q).unwrap().is_graphicable());
        assert!(complete_algebra(4, Q).unwrap().is_graphicable());
        let markov = EvolutionAlgebra::from_triplets(
            Q,
            2,
            vec![(0, 1, q(1, 3)), (1, 0, q(1, 3))],
        )
        .unwrap();
        assert!(!markov.is_graphicable());
        let looped = cycle_algebra(3, Q).unwrap().with_diagonal(&q(1, 1)).unwrap();
        assert!(!looped.is_graphicable());
        assert!(looped.is_graphicable_with(true));
    }

    #[test]
    fn rank_over_each_field() {
        // J - I on three points has determinant 2.
        assert!(complete_algebra(3, Q).unwrap().is_nonsingular());
        assert_eq!(complete_algebra(3, Q).unwrap().rank(), 3);
        // ... which vanishes modulo 2.
        assert_eq!(complete_algebra(3, f2()).unwrap().rank(), 2);
        assert!(!EvolutionAlgebra::zero(Q, 3).unwrap().is_nonsingular());
        let ident = EvolutionAlgebra::zero(Q, 4)
            .unwrap()
            .with_diagonal(&q(1, 1))
            .unwrap();
        assert!(ident.is_nonsingular());
        // C_4 has eigenvalue 0 twice.
        assert_eq!(cycle_algebra(4, Q).unwrap().rank(), 2);
        assert_eq!(cycle_algebra(4, FieldDescriptor::Real).unwrap().rank(), 2);
        assert!(!cycle_algebra(4, Q).unwrap().is_nonsingular());
    }

    #[test]
    fn rescale_by_ones_is_identity() {
        let a = cycle_algebra(5, Q).unwrap();
        let ones = vec![Scalar::one(Q); 5];
        assert_eq!(a.rescale_basis(&ones).unwrap(), a);
    }

    #[test]
    fn rescale_entrywise_formula() {
        let a = cycle_algebra(3, Q).unwrap();
        let b = a.rescale_basis(&[q(1, 1), q(2, 1), q(1, 1)]).unwrap();
        assert_eq!(b.entry(0, 1), q(2, 1));
        assert_eq!(b.entry(2, 1), q(2, 1));
        assert_eq!(b.entry(1, 0), q(1, 4));
        assert_eq!(b.entry(1, 2), q(1, 4));
        assert_eq!(b.entry(0, 2), q(1, 1));
        assert_eq!(b.entry(2, 0), q(1, 1));
        assert!(b.entry_is_zero(0, 0));
    }

    #[test]
    fn rescaled_constants_describe_the_basis_e_over_lambda() {
        // f_i = e_i / lambda_i must satisfy f_i^2 = sum_j a'_ij f_j.
        let a = EvolutionAlgebra::from_triplets(
            Q,
            3,
            vec![(0, 1, q(3, 1)), (1, 2, q(-1, 2)), (2, 0, q(5, 1)), (2, 2, q(1, 1))],
        )
        .unwrap();
        let lambdas = [q(2, 1), q(-3, 1), q(1, 5)];
        let b = a.rescale_basis(&lambdas).unwrap();
        for i in 0..3 {
            let fi = a
                .basis_element(i)
                .unwrap()
                .scale(&lambdas[i].inv().unwrap())
                .unwrap();
            let lhs = a.multiply(&fi, &fi).unwrap();
            let mut rhs = Element::zero(Q, 3);
            for j in 0..3 {
                let fj = a
                    .basis_element(j)
                    .unwrap()
                    .scale(&lambdas[j].inv().unwrap())
                    .unwrap();
                rhs = rhs.add(&fj.scale(&b.entry(i, j)).unwrap()).unwrap();
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn zero_rescaling_rejected() {
        let a = cycle_algebra(3, Q).unwrap();
        assert!(matches!(
            a.rescale_basis(&[q(1, 1), q(0, 1), q(1, 1)]),
            Err(Error::ZeroScaling(1))
        ));
    }

    #[test]
    fn permutations() {
        let a = cycle_algebra(3, Q).unwrap();
        assert_eq!(a.permute_basis(&[0, 1, 2]).unwrap(), a);
        assert_eq!(a.permute_basis(&[1, 2, 0]).unwrap(), a);
        let one_way = EvolutionAlgebra::from_int_matrix(
            Q,
            &[vec![0, 7, 0], vec![0, 0, 0], vec![0, 0, 0]],
        )
        .unwrap();
        let swapped = one_way.permute_basis(&[1, 0, 2]).unwrap();
        assert_eq!(swapped.entry(1, 0), q(7, 1));
        assert!(swapped.entry_is_zero(0, 1));
        assert!(a.permute_basis(&[0, 0, 1]).is_err());
        assert!(a.permute_basis(&[0, 1]).is_err());
    }

    #[test]
    fn json_round_trip_preserves_entries() {
        let a = EvolutionAlgebra::from_triplets(
            Q,
            3,
            vec![(0, 1, q(-2, 7)), (2, 2, q(5, 1))],
        )
        .unwrap();
        let text = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"field":{"kind":"rational"},"n":3,"entries":[[0,1,"-2/7"],[2,2,"5"]]}"#
        );
        assert_eq!(EvolutionAlgebra::from_json_str(&text).unwrap(), a);
    }

    #[test]
    fn duplicate_and_out_of_range_triplets_rejected() {
        assert!(EvolutionAlgebra::from_triplets(Q, 2, vec![(0, 1, q(1, 1)), (0, 1, q(2, 1))]).is_err());
        assert!(EvolutionAlgebra::from_triplets(Q, 2, vec![(0, 2, q(1, 1))]).is_err());
        assert!(EvolutionAlgebra::zero(Q, 0).is_err());
    }
}
