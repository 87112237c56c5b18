//! Finite groups by breadth-first closure, with deterministic element
//! numbering (discovery order from the identity under right multiplication
//! by the generators).

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::field::{is_prime, mod_inverse};

/// Groups up to this order keep an explicit multiplication table.
pub const TABLE_LIMIT: usize = 1024;
/// Groups up to this order get the full associativity check.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 256;
/// Largest modulus accepted by the matrix-group constructors.
pub const MAX_MATRIX_MODULUS: u64 = 37;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixQuotient {
    /// Determinant-one matrices.
    Sl,
    /// Determinant-one matrices modulo `±I`.
    Psl,
    /// Invertible matrices modulo scalars.
    Pgl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// Integers modulo `n` under addition.
    Additive(u32),
    /// Permutations of `0..degree` as image lists; `(g h)(x) = g(h(x))`.
    Permutation(usize),
    /// 2x2 matrices `[a, b, c, d]` over `F_p` in canonical form.
    Matrix { p: u64, quotient: MatrixQuotient },
}

impl Repr {
    fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        match self {
            Repr::Additive(n) => vec![((x[0] as u64 + y[0] as u64) % *n as u64) as u32],
            Repr::Permutation(_) => y.iter().map(|&v| x[v as usize]).collect(),
            Repr::Matrix { p, quotient } => {
                let p = *p;
                let m = |a: u32, b: u32| a as u64 * b as u64;
                let raw = [
                    (m(x[0], y[0]) + m(x[1], y[2])) % p,
                    (m(x[0], y[1]) + m(x[1], y[3])) % p,
                    (m(x[2], y[0]) + m(x[3], y[2])) % p,
                    (m(x[2], y[1]) + m(x[3], y[3])) % p,
                ];
                canonical_matrix(raw, p, *quotient)
            }
        }
    }

    fn identity(&self) -> Vec<u32> {
        match self {
            Repr::Additive(_) => vec![0],
            Repr::Permutation(degree) => (0..*degree as u32).collect(),
            Repr::Matrix { .. } => vec![1, 0, 0, 1],
        }
    }

    fn inverse(&self, x: &[u32]) -> Vec<u32> {
        match self {
            Repr::Additive(n) => vec![(*n - x[0]) % *n],
            Repr::Permutation(degree) => {
                let mut inv = vec![0u32; *degree];
                for (i, &v) in x.iter().enumerate() {
                    inv[v as usize] = i as u32;
                }
                inv
            }
            Repr::Matrix { p, quotient } => {
                let p = *p;
                let [a, b, c, d] = [x[0] as u64, x[1] as u64, x[2] as u64, x[3] as u64];
                let det = (a * d % p + p - b * c % p) % p;
                let di = mod_inverse(det, p);
                let raw = [d * di % p, (p - b) % p * di % p, (p - c) % p * di % p, a * di % p];
                canonical_matrix(raw, p, *quotient)
            }
        }
    }

    fn label(&self, x: &[u32]) -> String {
        match self {
            Repr::Additive(_) => x[0].to_string(),
            Repr::Permutation(_) => format!(
                "[{}]",
                x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
            ),
            Repr::Matrix { .. } => format!("[[{},{}],[{},{}]]", x[0], x[1], x[2], x[3]),
        }
    }
}

/// Canonical representative of a matrix in the chosen quotient.
fn canonical_matrix(m: [u64; 4], p: u64, quotient: MatrixQuotient) -> Vec<u32> {
    match quotient {
        MatrixQuotient::Sl => m.iter().map(|&v| v as u32).collect(),
        MatrixQuotient::Psl => {
            let neg = m.map(|v| (p - v) % p);
            let pick = if neg < m { neg } else { m };
            pick.iter().map(|&v| v as u32).collect()
        }
        MatrixQuotient::Pgl => {
            // First nonzero entry in column-major order (a, c, b, d) becomes 1.
            let lead = [m[0], m[2], m[1], m[3]]
                .into_iter()
                .find(|v| *v != 0)
                .expect("invertible matrix");
            let inv = mod_inverse(lead, p);
            m.iter().map(|&v| (v * inv % p) as u32).collect()
        }
    }
}

/// Generators accepted by [`group_from_generators`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupGenerators {
    /// Image lists over `0..degree`.
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
    /// Integer matrices `[a, b, c, d]` reduced modulo `p` into the quotient.
    Matrices {
        p: u64,
        quotient: MatrixQuotient,
        generators: Vec<[i64; 4]>,
    },
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    repr: Repr,
    elements: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    inverses: Vec<usize>,
    table: Option<Vec<u32>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.elements == other.elements
    }
}

impl FiniteGroup {
    fn close(repr: Repr, generators: Vec<Vec<u32>>, caps: &ResourceCaps) -> Result<Self> {
        let identity = repr.identity();
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for s in &generators {
                let h = repr.mul(&elements[g], s);
                if !index.contains_key(&h) {
                    if elements.len() >= caps.group_order {
                        return Err(Error::GroupOrderCapExceeded {
                            cap: caps.group_order,
                        });
                    }
                    index.insert(h.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(h);
                }
            }
        }
        let inverses = elements
            .iter()
            .map(|g| index[&repr.inverse(g)])
            .collect();
        let mut group = FiniteGroup {
            repr,
            elements,
            index,
            inverses,
            table: None,
        };
        if group.order() <= TABLE_LIMIT {
            let m = group.order();
            let mut table = Vec::with_capacity(m * m);
            for a in 0..m {
                for b in 0..m {
                    let prod = group.repr.mul(&group.elements[a], &group.elements[b]);
                    table.push(group.index[&prod] as u32);
                }
            }
            group.table = Some(table);
            group.verify_axioms()?;
        }
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The identity is always element 0.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.repr.mul(&self.elements[a], &self.elements[b])],
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn label(&self, a: usize) -> String {
        self.repr.label(&self.elements[a])
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    /// Raw coordinates of an element (residue, image list or matrix entries).
    pub fn element(&self, a: usize) -> &[u32] {
        &self.elements[a]
    }

    /// Index of a matrix given by integer entries, reduced into the group's
    /// canonical form.
    pub fn find_matrix(&self, m: [i64; 4]) -> Option<usize> {
        match &self.repr {
            Repr::Matrix { p, quotient } => {
                let raw = m.map(|v| v.rem_euclid(*p as i64) as u64);
                self.index.get(&canonical_matrix(raw, *p, *quotient)).copied()
            }
            _ => None,
        }
    }

    pub fn find_permutation(&self, images: &[usize]) -> Option<usize> {
        let key: Vec<u32> = images.iter().map(|&v| v as u32).collect();
        match &self.repr {
            Repr::Permutation(_) => self.index.get(&key).copied(),
            _ => None,
        }
    }

    /// Table closure, identity and inverse laws, and associativity: every
    /// triple up to [`FULL_ASSOCIATIVITY_LIMIT`], `10 m^2` seeded random
    /// triples above. Groups without a table are products of a concrete
    /// representation and inherit the axioms from it.
    pub fn verify_axioms(&self) -> Result<()> {
        let Some(table) = &self.table else {
            return Ok(());
        };
        let m = self.order();
        if table.iter().any(|&v| v as usize >= m) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        for a in 0..m {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvalidGroup(format!("identity law fails at {a}")));
            }
            let inv = self.inverse(a);
            if self.mul(a, inv) != 0 || self.mul(inv, a) != 0 {
                return Err(Error::InvalidGroup(format!("inverse law fails at {a}")));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if m <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroup(format!("({a} {b}) {c} != {a} ({b} {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..10 * m * m {
                let (a, b, c) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!("({a} {b}) {c} != {a} ({b} {c})")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order(),
            identity: 0,
            labels: (0..self.order()).map(|a| self.label(a)).collect(),
            inverse: self.inverses.clone(),
            table: self.table.as_ref().map(|t| {
                t.chunks(self.order())
                    .map(|row| row.iter().map(|&v| v as usize).collect())
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupJson {
    pub order: usize,
    pub identity: usize,
    pub labels: Vec<String>,
    pub inverse: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

/// Closure of the given generators.
pub fn group_from_generators(generators: &GroupGenerators, caps: &ResourceCaps) -> Result<FiniteGroup> {
    match generators {
        GroupGenerators::Permutations { degree, generators } => {
            let mut gens = Vec::with_capacity(generators.len());
            for g in generators {
                crate::algebra::validate_permutation(g, *degree)
                    .map_err(|_| Error::InvalidGroup(format!("{g:?} is not a permutation of 0..{degree}")))?;
                gens.push(g.iter().map(|&v| v as u32).collect());
            }
            FiniteGroup::close(Repr::Permutation(*degree), gens, caps)
        }
        GroupGenerators::Matrices {
            p,
            quotient,
            generators,
        } => {
            let p = *p;
            if !is_prime(p) || p > u16::MAX as u64 {
                return Err(Error::InvalidGroup(format!("modulus {p} is not a supported prime")));
            }
            let mut gens = Vec::with_capacity(generators.len());
            for g in generators {
                let raw = g.map(|v| v.rem_euclid(p as i64) as u64);
                let det = (raw[0] * raw[3] % p + p - raw[1] * raw[2] % p) % p;
                let ok = match quotient {
                    MatrixQuotient::Pgl => det != 0,
                    MatrixQuotient::Sl | MatrixQuotient::Psl => det == 1,
                };
                if !ok {
                    return Err(Error::InvalidGroup(format!(
                        "{g:?} has determinant {det} modulo {p}"
                    )));
                }
                gens.push(canonical_matrix(raw, p, *quotient));
            }
            FiniteGroup::close(Repr::Matrix { p, quotient: *quotient }, gens, caps)
        }
    }
}

fn check_matrix_modulus(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) || p > MAX_MATRIX_MODULUS {
        return Err(Error::InvalidGroup(format!(
            "matrix groups need an odd prime modulus <= {MAX_MATRIX_MODULUS}, got {p}"
        )));
    }
    Ok(())
}

const ELEMENTARY: [[i64; 4]; 2] = [[1, 1, 0, 1], [1, 0, 1, 1]];

/// `Z_n` with generator `1`; element `k` is the residue `k`.
pub fn cyclic_group(n: usize, caps: &ResourceCaps) -> Result<FiniteGroup> {
    if n == 0 || n > u32::MAX as usize {
        return Err(Error::InvalidGroup("cyclic group needs n >= 1".into()));
    }
    let gens = if n == 1 { vec![] } else { vec![vec![1]] };
    FiniteGroup::close(Repr::Additive(n as u32), gens, caps)
}

/// The symmetry group of the regular n-gon (order `2n`), generated by the
/// rotation `i -> i+1` and the reflection `i -> -i`.
pub fn dihedral_group(n: usize, caps: &ResourceCaps) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidGroup("dihedral group needs n >= 3".into()));
    }
    group_from_generators(
        &GroupGenerators::Permutations {
            degree: n,
            generators: vec![(0..n).map(|i| (i + 1) % n).collect(), (0..n).map(|i| (n - i) % n).collect()],
        },
        caps,
    )
}

/// `S_m` for `1 <= m <= 7`, generated by `(0 1)` and `(0 1 ... m-1)`.
pub fn symmetric_group(m: usize, caps: &ResourceCaps) -> Result<FiniteGroup> {
    if !(1..=7).contains(&m) {
        return Err(Error::InvalidGroup("symmetric group needs 1 <= m <= 7".into()));
    }
    let mut transposition: Vec<usize> = (0..m).collect();
    if m >= 2 {
        transposition.swap(0, 1);
    }
    group_from_generators(
        &GroupGenerators::Permutations {
            degree: m,
            generators: vec![transposition, (0..m).map(|i| (i + 1) % m).collect()],
        },
        caps,
    )
}

pub fn sl2(p: u64, caps: &ResourceCaps) -> Result<FiniteGroup> {
    check_matrix_modulus(p)?;
    group_from_generators(
        &GroupGenerators::Matrices {
            p,
            quotient: MatrixQuotient::Sl,
            generators: ELEMENTARY.to_vec(),
        },
        caps,
    )
}

pub fn psl2(q: u64, caps: &ResourceCaps) -> Result<FiniteGroup> {
    check_matrix_modulus(q)?;
    group_from_generators(
        &GroupGenerators::Matrices {
            p: q,
            quotient: MatrixQuotient::Psl,
            generators: ELEMENTARY.to_vec(),
        },
        caps,
    )
}

pub fn pgl2(q: u64, caps: &ResourceCaps) -> Result<FiniteGroup> {
    check_matrix_modulus(q)?;
    let g = primitive_root(q) as i64;
    let mut generators = ELEMENTARY.to_vec();
    generators.push([g, 0, 0, 1]);
    group_from_generators(
        &GroupGenerators::Matrices {
            p: q,
            quotient: MatrixQuotient::Pgl,
            generators,
        },
        caps,
    )
}

/// Smallest primitive root modulo an odd prime.
pub(crate) fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut rest = phi;
    let mut f = 2;
    while f * f <= rest {
        if rest % f == 0 {
            factors.push(f);
            while rest % f == 0 {
                rest /= f;
            }
        }
        f += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, phi / f, p) != 1))
        .expect("primes have primitive roots")
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// A symmetric, identity-free subset of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingSet {
    pub elements: Vec<usize>,
    pub symmetric: bool,
}

impl GeneratingSet {
    /// Validates `S = S^{-1}` and `1 ∉ S`; duplicates collapse, order is kept.
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let mut seen = Vec::new();
        for &s in elements {
            if s >= group.order() {
                return Err(Error::InvalidGeneratingSet(format!("element {s} out of range")));
            }
            if s == group.identity() {
                return Err(Error::InvalidGeneratingSet("contains the identity".into()));
            }
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
        if let Some(&s) = seen.iter().find(|&&s| !seen.contains(&group.inverse(s))) {
            return Err(Error::InvalidGeneratingSet(format!(
                "not closed under inversion: {} lacks its inverse",
                group.label(s)
            )));
        }
        Ok(GeneratingSet {
            elements: seen,
            symmetric: true,
        })
    }

    /// `T ∪ T^{-1}` without the identity.
    pub fn symmetric_closure(group: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let mut all = Vec::new();
        for &s in elements {
            if s >= group.order() {
                return Err(Error::InvalidGeneratingSet(format!("element {s} out of range")));
            }
            for t in [s, group.inverse(s)] {
                if t != group.identity() && !all.contains(&t) {
                    all.push(t);
                }
            }
        }
        GeneratingSet::new(group, &all)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether `S` generates the whole group.
    pub fn generates(&self, group: &FiniteGroup) -> bool {
        let mut seen = vec![false; group.order()];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(g) = stack.pop() {
            for &s in &self.elements {
                let h = group.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    count += 1;
                    stack.push(h);
                }
            }
        }
        count == group.order()
    }
}
