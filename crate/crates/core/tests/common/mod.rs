//! Independent oracles for integration tests: exact characteristic
//! polynomials, square-free factorization, Sturm root counting, brute-force
//! Cheeger constants and BFS balls. Nothing here calls into the library's
//! numerical or enumeration code.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with coefficients from degree 0 upward; no trailing zeros.
pub type Poly = Vec<BigRational>;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// `det(xI - A)` by Faddeev–LeVerrier, exact over ℚ.
pub fn charpoly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let a: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|&v| qi(v)).collect()).collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} A, c_{n-k} = -tr(M_k)/k.
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut shifted = m.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if a[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    next[i][j] += &a[i][l] * &shifted[l][j];
                }
            }
        }
        let tr: BigRational = (0..n).map(|i| next[i][i].clone()).sum();
        coeffs[n - k] = -tr / qi(k as i64);
        m = next;
    }
    trim(coeffs)
}

pub fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &Poly) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * qi(k as i64)).collect())
}

/// Quotient and remainder of `a / b`.
pub fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quot = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] -= &c * bc;
        }
        quot[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(quot), r)
}

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(BigRational::one);
    a.iter().map(|c| c / &lead).collect()
}

/// Yun's square-free factorization: `p = c * prod f_m^m`, returned as
/// `(f_m, m)` with each `f_m` square-free.
pub fn yun(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let dp = derivative(p);
    let g = gcd(p, &dp);
    let (mut b, _) = divmod(p, &g);
    let (c, _) = divmod(&dp, &g);
    let mut d = sub(&c, &derivative(&b));
    let mut m = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        let (nb, _) = divmod(&b, &a);
        let (nc, _) = divmod(&d, &a);
        if a.len() > 1 {
            out.push((a, m));
        }
        b = nb;
        d = sub(&nc, &derivative(&b));
        m += 1;
    }
    out
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|k| {
                a.get(k).cloned().unwrap_or_else(BigRational::zero)
                    - b.get(k).cloned().unwrap_or_else(BigRational::zero)
            })
            .collect(),
    )
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of the square-free `p` in `(a, b]`.
pub fn sturm_count(p: &Poly, a: &BigRational, b: &BigRational) -> usize {
    let mut seq = vec![trim(p.clone()), derivative(p)];
    while seq.last().unwrap().len() > 1 {
        let k = seq.len();
        let (_, r) = divmod(&seq[k - 2], &seq[k - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.iter().map(|c| -c).collect());
    }
    sign_changes(&seq, a) - sign_changes(&seq, b)
}

/// Total multiplicity of the roots of `p` in `(a, b]`.
pub fn roots_in(p: &Poly, a: &BigRational, b: &BigRational) -> usize {
    yun(p).iter().map(|(f, m)| m * sturm_count(f, a, b)).sum()
}

/// Rational bracket around a float, with half-width `radius`.
pub fn bracket(x: f64, radius: f64) -> (BigRational, BigRational) {
    let lo = BigRational::from_float(x - radius).unwrap();
    let hi = BigRational::from_float(x + radius).unwrap();
    (lo, hi)
}

/// `prod (x - r)^m` for integer roots.
pub fn from_integer_roots(roots: &[(i64, usize)]) -> Poly {
    let mut p: Poly = vec![BigRational::one()];
    for &(r, m) in roots {
        for _ in 0..m {
            let mut next = vec![BigRational::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * qi(r);
            }
            p = next;
        }
    }
    trim(p)
}

/// Adjacency lists to a dense 0/1 matrix.
pub fn adjacency_matrix(adj: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let n = adj.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, nbrs) in adj.iter().enumerate() {
        for &j in nbrs {
            m[i][j] = 1;
        }
    }
    m
}

/// `min |∂S| / |S|` over nonempty `S` with `|S| <= n/2`, by plain subset
/// scan. `None` for `n < 2`.
pub fn brute_cheeger(adj: &[Vec<usize>]) -> Option<BigRational> {
    let n = adj.len();
    assert!(n <= 20, "brute force limited to n <= 20");
    if n < 2 {
        return None;
    }
    let mut best: Option<BigRational> = None;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let mut boundary = 0i64;
        for v in 0..n {
            if mask >> v & 1 == 1 {
                boundary += adj[v].iter().filter(|&&w| mask >> w & 1 == 0).count() as i64;
            }
        }
        let ratio = q(boundary, size as i64);
        if best.as_ref().map_or(true, |b| &ratio < b) {
            best = Some(ratio);
        }
    }
    best
}

/// Vertices within distance `k` of `i`, sorted.
pub fn ball(adj: &[Vec<usize>], i: usize, k: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[i] = 0;
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == k {
            continue;
        }
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..adj.len()).filter(|&v| dist[v] <= k).collect()
}

/// Adjacency lists of the cycle `C_n`.
pub fn cycle_adj(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect()
}

/// Adjacency lists of `K_n`.
pub fn complete_adj(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect()
}

/// One acceptance line: prints `PASS`/`FAIL`, then asserts.
pub fn verdict(id: &str, title: &str, clauses: &[(&str, bool)], elapsed: Duration, limit: Duration) {
    let in_time = elapsed < limit;
    for (name, ok) in clauses {
        println!("  [{}] {name}", if *ok { "ok" } else { "FAILED" });
    }
    let pass = in_time && clauses.iter().all(|(_, ok)| *ok);
    println!(
        "{} {id} {title} ({:.3}s, limit {:.0}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    assert!(pass, "{id} failed");
}
