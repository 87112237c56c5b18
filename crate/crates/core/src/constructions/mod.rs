//! Named algebra families, Cayley evolution algebras, Kronecker products,
//! direct sums and seeded random regular algebras.

mod groups;
mod lps;

pub use groups::{
    cyclic_group, dihedral_group, group_from_generators, pgl2, psl2, sl2, symmetric_group,
    FiniteGroup, GeneratingSet, GroupGenerators, GroupJson, MatrixQuotient, FULL_ASSOCIATIVITY_LIMIT,
    MAX_MATRIX_MODULUS, TABLE_LIMIT,
};
pub use lps::{is_quadratic_residue, lps_generating_set, lps_quadruples, LpsData};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::EvolutionAlgebra;
use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Scalar};
use crate::graph::{algebra_from_graph, SimpleGraph};

/// Pairing attempts before [`random_regular_graph`] gives up.
pub const MAX_PAIRING_ATTEMPTS: usize = 1_000_000;

/// `e_i^2 = e_{i-1} + e_{i+1}` (indices mod n), `n >= 3`.
pub fn cycle_algebra(n: usize, field: FieldDescriptor) -> Result<EvolutionAlgebra> {
    if n < 3 {
        return Err(Error::InvalidArgument("cycle algebra needs n >= 3".into()));
    }
    let graph = SimpleGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?;
    algebra_from_graph(&graph, field)
}

/// `e_i^2 = sum_{j != i} e_j`, `n >= 2`.
pub fn complete_algebra(n: usize, field: FieldDescriptor) -> Result<EvolutionAlgebra> {
    if n < 2 {
        return Err(Error::InvalidArgument("complete algebra needs n >= 2".into()));
    }
    let graph = SimpleGraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))?;
    algebra_from_graph(&graph, field)
}

/// Vertex labels of the Petersen graph as the Kneser graph K(5,2): the
/// 2-subsets of `{0..4}` in lexicographic order.
pub fn petersen_labels() -> Vec<[usize; 2]> {
    (0..5)
        .flat_map(|a| (a + 1..5).map(move |b| [a, b]))
        .collect()
}

pub fn petersen_graph() -> SimpleGraph {
    let labels = petersen_labels();
    let disjoint = |x: &[usize; 2], y: &[usize; 2]| x.iter().all(|v| !y.contains(v));
    let edges = (0..10).flat_map(|i| {
        let labels = &labels;
        (i + 1..10)
            .filter(move |&j| disjoint(&labels[i], &labels[j]))
            .map(move |j| (i, j))
    });
    SimpleGraph::new(10, edges.collect::<Vec<_>>()).expect("valid Kneser graph")
}

pub fn petersen_algebra(field: FieldDescriptor) -> Result<EvolutionAlgebra> {
    algebra_from_graph(&petersen_graph(), field)
}

/// Block-diagonal sum; the second algebra's indices are shifted by `n_1`.
pub fn direct_sum(a: &EvolutionAlgebra, b: &EvolutionAlgebra) -> Result<EvolutionAlgebra> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            expected: a.field(),
            found: b.field(),
        });
    }
    let shift = a.dim();
    let triplets = a
        .nonzeros()
        .map(|(i, j, v)| (i, j, v.clone()))
        .chain(b.nonzeros().map(|(i, j, v)| (i + shift, j + shift, v.clone())))
        .collect::<Vec<_>>();
    EvolutionAlgebra::from_triplets(a.field(), a.dim() + b.dim(), triplets)
}

/// `a_{(i,j),(k,l)} = a1_ik a2_jl` with row-major index `(i, j) -> i n_2 + j`.
pub fn kronecker_product(a: &EvolutionAlgebra, b: &EvolutionAlgebra) -> Result<EvolutionAlgebra> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            expected: a.field(),
            found: b.field(),
        });
    }
    let n2 = b.dim();
    let mut triplets = Vec::with_capacity(a.nnz() * b.nnz());
    for (i, k, x) in a.nonzeros() {
        for (j, l, y) in b.nonzeros() {
            let v: Scalar = x * y;
            triplets.push((i * n2 + j, k * n2 + l, v));
        }
    }
    EvolutionAlgebra::from_triplets(a.field(), a.dim() * n2, triplets)
}

/// A Cayley evolution algebra together with whether `S` generates `G`.
#[derive(Clone, Debug)]
pub struct CayleyAlgebra {
    pub algebra: EvolutionAlgebra,
    /// False when `S` generates a proper subgroup; the algebra is then
    /// disconnected (one block per coset).
    pub connected: bool,
}

/// `e_g^2 = sum_{s in S} e_{gs}`.
pub fn cayley_evolution_algebra(
    group: &FiniteGroup,
    set: &GeneratingSet,
    field: FieldDescriptor,
) -> Result<CayleyAlgebra> {
    // Revalidate: the set may have been built by hand.
    let set = GeneratingSet::new(group, &set.elements)?;
    let one = Scalar::one(field);
    let m = group.order();
    let mut triplets = Vec::with_capacity(m * set.len());
    for g in 0..m {
        for &s in &set.elements {
            triplets.push((g, group.mul(g, s), one.clone()));
        }
    }
    Ok(CayleyAlgebra {
        algebra: EvolutionAlgebra::from_triplets(field, m, triplets)?,
        connected: set.generates(group),
    })
}

/// Cayley algebra of `Z_n` with `S = {1, -1}`; equal to [`cycle_algebra`].
pub fn cayley_cyclic(n: usize, field: FieldDescriptor, caps: &ResourceCaps) -> Result<CayleyAlgebra> {
    let g = cyclic_group(n, caps)?;
    let set = GeneratingSet::symmetric_closure(&g, &[1 % n])?;
    cayley_evolution_algebra(&g, &set, field)
}

/// Dihedral group of order `2n` with `S = {r, r^{-1}, s}`.
pub fn cayley_dihedral(n: usize, field: FieldDescriptor, caps: &ResourceCaps) -> Result<CayleyAlgebra> {
    let g = dihedral_group(n, caps)?;
    let set = GeneratingSet::symmetric_closure(&g, &[1, 2])?;
    cayley_evolution_algebra(&g, &set, field)
}

/// `S_m` with `S = {(0 1), c, c^{-1}}` for the long cycle `c`.
pub fn cayley_symmetric(m: usize, field: FieldDescriptor, caps: &ResourceCaps) -> Result<CayleyAlgebra> {
    let g = symmetric_group(m, caps)?;
    let gens: Vec<usize> = (1..g.order().min(3)).collect();
    let set = GeneratingSet::symmetric_closure(&g, &gens)?;
    cayley_evolution_algebra(&g, &set, field)
}

/// `SL_2(F_p)` with the elementary matrices and their inverses.
pub fn cayley_sl2(p: u64, field: FieldDescriptor, caps: &ResourceCaps) -> Result<CayleyAlgebra> {
    let g = sl2(p, caps)?;
    let set = sl2_elementary_set(&g)?;
    cayley_evolution_algebra(&g, &set, field)
}

/// `{[[1, ±1], [0, 1]], [[1, 0], [±1, 1]]}` inside an `SL_2` group.
pub fn sl2_elementary_set(group: &FiniteGroup) -> Result<GeneratingSet> {
    let find = |m: [i64; 4]| {
        group
            .find_matrix(m)
            .ok_or_else(|| Error::InvalidGeneratingSet(format!("{m:?} not in group")))
    };
    let elems = [
        find([1, 1, 0, 1])?,
        find([1, -1, 0, 1])?,
        find([1, 0, 1, 1])?,
        find([1, 0, -1, 1])?,
    ];
    GeneratingSet::new(group, &elems)
}

/// LPS Cayley algebra `X^{p,q}`.
pub fn lps_algebra(p: u64, q: u64, field: FieldDescriptor, caps: &ResourceCaps) -> Result<CayleyAlgebra> {
    let data = lps_generating_set(p, q, caps)?;
    cayley_evolution_algebra(&data.group, &data.generators, field)
}

/// Uniform random d-regular simple graph by the pairing model with
/// whole-sample rejection, seeded through ChaCha8.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<SimpleGraph> {
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n * d = {} must be even", n * d)));
    }
    if d >= n {
        return Err(Error::InvalidArgument(format!("degree {d} must be below n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut seen = vec![false; n * n];
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        points.shuffle(&mut rng);
        seen.iter_mut().for_each(|s| *s = false);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || seen[a * n + b] {
                continue 'attempt;
            }
            seen[a * n + b] = true;
            edges.push((a, b));
        }
        return SimpleGraph::new(n, edges);
    }
    Err(Error::RejectionCapExceeded {
        attempts: MAX_PAIRING_ATTEMPTS,
    })
}

pub fn random_regular_algebra(n: usize, d: usize, seed: u64, field: FieldDescriptor) -> Result<EvolutionAlgebra> {
    if n == 0 {
        return Err(Error::InvalidArgument("random regular algebra needs n >= 1".into()));
    }
    algebra_from_graph(&random_regular_graph(n, d, seed)?, field)
}
