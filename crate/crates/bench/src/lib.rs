//! Fixed inputs shared by the kernel benchmarks.

use eea_core::constructions::{petersen_graph, random_regular_graph};
use eea_core::{EvolutionAlgebra, FieldDescriptor, RealMatrix, SimpleGraph};

/// Seed used for every random fixture.
pub const SEED: u64 = 2024;

/// Random 3-regular graph on `n` vertices with the fixed seed.
pub fn cubic_graph(n: usize) -> SimpleGraph {
    random_regular_graph(n, 3, SEED).expect("n even and at least 4")
}

/// Adjacency matrix of a random 4-regular graph on `n` vertices.
pub fn quartic_adjacency(n: usize) -> RealMatrix {
    RealMatrix::adjacency(&random_regular_graph(n, 4, SEED).expect("n at least 5"))
}

/// Evolution algebra of the Petersen graph over the rationals.
pub fn petersen_rational() -> EvolutionAlgebra {
    eea_core::graph::algebra_from_graph(&petersen_graph(), FieldDescriptor::Rational).expect("valid graph")
}
