//! Self-checks for the test oracles against hand-computed values.

mod common;

use common::*;

#[test]
fn charpoly_of_triangle() {
    let p = charpoly(&adjacency_matrix(&cycle_adj(3)));
    assert_eq!(p, from_integer_roots(&[(2, 1), (-1, 2)]));
}

#[test]
fn charpoly_of_k4() {
    let p = charpoly(&adjacency_matrix(&complete_adj(4)));
    assert_eq!(p, from_integer_roots(&[(3, 1), (-1, 3)]));
}

#[test]
fn square_free_parts_and_root_counts() {
    let p = from_integer_roots(&[(3, 1), (1, 5), (-2, 4)]);
    let mut mults: Vec<usize> = yun(&p).iter().map(|(_, m)| *m).collect();
    mults.sort();
    assert_eq!(mults, vec![1, 4, 5]);
    assert_eq!(roots_in(&p, &qi(0), &qi(2)), 5);
    assert_eq!(roots_in(&p, &qi(-3), &qi(-1)), 4);
    assert_eq!(roots_in(&p, &qi(-10), &qi(10)), 10);
    let (lo, hi) = bracket(3.0, 1e-6);
    assert_eq!(roots_in(&p, &lo, &hi), 1);
}

#[test]
fn irrational_roots_are_counted() {
    // x^2 - 2 has one root in (1, 2] and one in (-2, -1].
    let p = vec![qi(-2), qi(0), qi(1)];
    assert_eq!(sturm_count(&p, &qi(1), &qi(2)), 1);
    assert_eq!(sturm_count(&p, &qi(-2), &qi(-1)), 1);
    assert_eq!(sturm_count(&p, &qi(-1), &qi(1)), 0);
}

#[test]
fn brute_force_cheeger() {
    assert_eq!(brute_cheeger(&cycle_adj(6)), Some(q(2, 3)));
    assert_eq!(brute_cheeger(&complete_adj(3)), Some(qi(2)));
    assert_eq!(brute_cheeger(&complete_adj(4)), Some(qi(2)));
    assert_eq!(brute_cheeger(&vec![vec![]]), None);
}

#[test]
fn balls() {
    assert_eq!(ball(&cycle_adj(6), 0, 1), vec![0, 1, 5]);
    assert_eq!(ball(&cycle_adj(6), 0, 3), (0..6).collect::<Vec<_>>());
}
