//! Property tests over random small algebras and graphs.

mod common;

use common::*;
use eea_core::algebra::{Element, EvolutionAlgebra};
use eea_core::constructions::random_regular_graph;
use eea_core::expansion::{cheeger_exact, edge_boundary, CheegerValue};
use eea_core::field::{FieldDescriptor, Scalar};
use eea_core::graph::{underlying_graph, SimpleGraph};
use eea_core::spectral::{symmetric_eigensystem, symmetric_eigenvalues, RealMatrix};
use eea_core::structure::{is_nested, step_growth_violations, support_trace, SupportMode};
use eea_core::ResourceCaps;
use num_rational::BigRational;
use proptest::prelude::*;

const Q: FieldDescriptor = FieldDescriptor::Rational;

/// Random `n x n` integer structure matrices with entries in `[-3, 3]`.
fn algebra_strategy(max_n: usize) -> impl Strategy<Value = EvolutionAlgebra> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, n), n)
            .prop_map(|rows| EvolutionAlgebra::from_int_matrix(FieldDescriptor::Rational, &rows).unwrap())
    })
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            SimpleGraph::new(n, edges).unwrap()
        })
    })
}

fn element_strategy(n: usize) -> impl Strategy<Value = Element> {
    prop::collection::vec(-4i64..=4, n).prop_map(|v| Element::from_ints(FieldDescriptor::Rational, &v))
}

fn adjacency_lists(graph: &SimpleGraph) -> Vec<Vec<usize>> {
    (0..graph.n()).map(|v| graph.neighbors(v).to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative_and_flexible(
        (a, x, y) in algebra_strategy(6).prop_flat_map(|a| {
            let n = a.dim();
            (Just(a), element_strategy(n), element_strategy(n))
        })
    ) {
        let xy = a.multiply(&x, &y).unwrap();
        prop_assert_eq!(&xy, &a.multiply(&y, &x).unwrap());
        // (xy)x = x(yx)
        let lhs = a.multiply(&xy, &x).unwrap();
        let rhs = a.multiply(&x, &a.multiply(&y, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn square_is_quadratic(
        (a, x) in algebra_strategy(6).prop_flat_map(|a| {
            let n = a.dim();
            (Just(a), element_strategy(n))
        }),
        c in -3i64..=3,
    ) {
        let scalar = Scalar::from_i64(Q, c);
        let lhs = a.square(&x.scale(&scalar).unwrap()).unwrap();
        let rhs = a.square(&x).unwrap().scale(&scalar.square()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip(a in algebra_strategy(7)) {
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back = EvolutionAlgebra::from_json_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn cheeger_matches_brute_force(graph in graph_strategy(9)) {
        let cert = cheeger_exact(&graph, &ResourceCaps::default()).unwrap();
        let brute = brute_cheeger(&adjacency_lists(&graph)).unwrap();
        prop_assert_eq!(cert.value.as_rational(), Some(&brute));
        prop_assert!(cert.verify(&graph).unwrap());
        // The witness attains the value.
        let boundary = edge_boundary(&graph, &cert.witness).unwrap().len();
        let ratio = BigRational::new(boundary.into(), cert.witness.len().into());
        prop_assert_eq!(CheegerValue::Finite(ratio), cert.value);
    }

    #[test]
    fn eigen_residuals_are_small(graph in graph_strategy(12)) {
        let m = RealMatrix::adjacency(&graph);
        let (spectrum, vectors) = symmetric_eigensystem(&m).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        for (lambda, v) in spectrum.eigenvalues.iter().zip(&vectors) {
            let av = m.mul_vec(v);
            let residual = av.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(residual <= 1e-9 * scale);
        }
        // Trace identity.
        let trace: f64 = spectrum.eigenvalues.iter().sum();
        prop_assert!(trace.abs() < 1e-9 * scale);
    }

    #[test]
    fn eigenvalues_agree_with_charpoly(graph in graph_strategy(8)) {
        let spectrum = symmetric_eigenvalues(&RealMatrix::adjacency(&graph)).unwrap();
        let p = charpoly(&adjacency_matrix(&adjacency_lists(&graph)));
        for (value, mult) in spectrum.clusters() {
            let (lo, hi) = bracket(value, 1e-6);
            prop_assert_eq!(roots_in(&p, &lo, &hi), mult);
        }
    }

    #[test]
    fn combinatorial_supports_grow(seed in 0u64..500, d in 3usize..=4) {
        let n = if d == 3 { 10 } else { 9 };
        let graph = random_regular_graph(n, d, seed).unwrap();
        let algebra = eea_core::graph::algebra_from_graph(&graph, Q).unwrap();
        let h = cheeger_exact(&graph, &ResourceCaps::default()).unwrap();
        let h = h.value.as_rational().unwrap().clone();
        let adj = adjacency_lists(&graph);
        for i in 0..n {
            let trace = support_trace(&algebra, i, 6, SupportMode::Combinatorial, &ResourceCaps::default()).unwrap();
            prop_assert!(is_nested(&trace));
            if graph.is_connected() {
                prop_assert!(step_growth_violations(&trace, n, d, &h).is_empty());
            }
            for (k, s) in trace.supports.iter().enumerate() {
                prop_assert_eq!(s, &ball(&adj, i, k));
            }
        }
    }

    #[test]
    fn random_regular_is_simple_and_regular(seed in 0u64..1000, n in 4usize..=16, d in 2usize..=4) {
        prop_assume!(n * d % 2 == 0 && d < n);
        let graph = random_regular_graph(n, d, seed).unwrap();
        prop_assert_eq!(graph.is_regular(), Some(d));
        prop_assert_eq!(&graph, &random_regular_graph(n, d, seed).unwrap());
    }

    #[test]
    fn underlying_graph_ignores_loops_and_signs(a in algebra_strategy(7)) {
        let g = underlying_graph(&a);
        for (i, j, _) in a.nonzeros() {
            if i != j {
                prop_assert!(g.has_edge(i, j));
            }
        }
        let negated = EvolutionAlgebra::from_triplets(
            Q,
            a.dim(),
            a.nonzeros().map(|(i, j, v)| (i, j, -v)).collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert_eq!(underlying_graph(&negated), g);
    }
}
