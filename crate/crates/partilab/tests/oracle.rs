//! Reference values fixed ahead of time by hand enumeration and by
//! independent exhaustive searches, checked against the production
//! solvers. The literals here were derived without running the solvers
//! under test, so agreement is evidence rather than tautology.

use partilab::core::{
    evaluate_objective, score_matrix, CompatibilityMatrix, ObjectiveKind, ScoreVector,
};
use partilab::general_solvers::{
    brute_force_optimal, exhaustive_max_cardinality, exhaustive_max_weight_perfect_matching,
    max_cardinality_matching, max_weight_perfect_matching, partition_count, solve_k2_avg,
    solve_k2_min, transitive_mom,
};
use partilab::learner::{learn_order, GraphSpec, LearnConfig, RoundsBudget};
use partilab::score_solvers::{
    evaluate_scores, greedy_moa, heterophilous_partition, homophilous_partition,
};
use partilab::simenv::{FeedbackEnv, NoiseModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn assert_close(actual: f64, expected: f64, what: &str) {
    assert!(
        (actual - expected).abs() < TOL,
        "{}: got {}, expected {}",
        what,
        actual,
        expected
    );
}

/// Every objective value for scores (4,3,2,1) with pair groups, from the
/// hand-enumerated table of all three partitions:
///   {01}{23}: AoA 7.25, MoM 2, AoM 7.0, MoA 2.25
///   {02}{13}: AoA 6.5,  MoM 3, AoM 5.5, MoA 4.0
///   {03}{12}: AoA 6.25, MoM 4, AoM 5.0, MoA 6.25
#[test]
fn four_items_hand_enumerated_table() {
    let s = ScoreVector::new(vec![4.0, 3.0, 2.0, 1.0]).unwrap();
    let w = score_matrix(&s);

    let expect = [
        (ObjectiveKind::AoA, 7.25),
        (ObjectiveKind::MoM, 4.0),
        (ObjectiveKind::AoM, 7.0),
        (ObjectiveKind::MoA, 6.25),
    ];
    for (kind, value) in expect {
        let (_, brute) = brute_force_optimal(&w, 2, kind).unwrap();
        assert_close(brute, value, &format!("brute {}", kind));
    }

    let hom = homophilous_partition(&s, 2).unwrap();
    assert_close(evaluate_scores(&s, &hom, ObjectiveKind::AoA).unwrap(), 7.25, "hom aoa");
    assert_close(evaluate_scores(&s, &hom, ObjectiveKind::AoM).unwrap(), 7.0, "hom aom");

    let het = heterophilous_partition(&s, 2).unwrap();
    assert_close(evaluate_scores(&s, &het, ObjectiveKind::MoM).unwrap(), 4.0, "het mom");

    let greedy = greedy_moa(&s, 2).unwrap();
    assert_close(evaluate_scores(&s, &greedy, ObjectiveKind::MoA).unwrap(), 6.25, "greedy moa");

    let (_, avg) = solve_k2_avg(&w).unwrap();
    assert_close(avg, 7.25, "k2 avg");
    let (_, mom) = solve_k2_min(&w, ObjectiveKind::MoM).unwrap();
    assert_close(mom, 4.0, "k2 mom");
    let (_, moa) = solve_k2_min(&w, ObjectiveKind::MoA).unwrap();
    assert_close(moa, 6.25, "k2 moa");
}

/// Two weight blocks (pairwise 6 inside {0,1,2}, pairwise 4 inside
/// {3,4,5}, 1 across, zero diagonal) with groups of three. The block
/// partition dominates every objective:
///   AoA = (36/9 + 24/9)/2 = 10/3, MoM = 4, AoM = (6+4)/2 = 5, MoA = 24/9.
#[test]
fn six_items_block_matrix_optima() {
    let mut rows = vec![vec![1.0; 6]; 6];
    for i in 0..6 {
        rows[i][i] = 0.0;
    }
    for block in [[0usize, 1, 2], [3usize, 4, 5]] {
        let weight = if block[0] == 0 { 6.0 } else { 4.0 };
        for &i in &block {
            for &j in &block {
                if i != j {
                    rows[i][j] = weight;
                }
            }
        }
    }
    let w = CompatibilityMatrix::from_rows(rows).unwrap();
    let expect = [
        (ObjectiveKind::AoA, 10.0 / 3.0),
        (ObjectiveKind::MoM, 4.0),
        (ObjectiveKind::AoM, 5.0),
        (ObjectiveKind::MoA, 8.0 / 3.0),
    ];
    for (kind, value) in expect {
        let (p, brute) = brute_force_optimal(&w, 3, kind).unwrap();
        assert_close(brute, value, &format!("brute {}", kind));
        if kind != ObjectiveKind::MoA {
            assert_eq!(p.groups(), &[vec![0, 1, 2], vec![3, 4, 5]], "{} partition", kind);
        }
    }
}

/// Closed-form partition counts n! / ((k!)^m * m!).
#[test]
fn frozen_partition_counts() {
    for (n, k, count) in [
        (6, 6, 1u128),
        (8, 4, 35),
        (10, 2, 945),
        (12, 2, 10395),
        (12, 3, 15400),
        (12, 4, 5775),
    ] {
        assert_eq!(partition_count(n, k).unwrap(), count, "count({}, {})", n, k);
    }
}

/// Noiseless singleton queries on a complete graph let the learner read
/// scores off directly: with s = (9,1,5,3,7) the shifted estimates are
/// exactly (0,-8,-4,-6,-2) and the ordering is 0,4,2,3,1.
#[test]
fn frozen_noiseless_learning_outcome() {
    let s = ScoreVector::new(vec![9.0, 1.0, 5.0, 3.0, 7.0]).unwrap();
    let mut env = FeedbackEnv::new(s, 1, NoiseModel::None, 17).unwrap();
    let mut cfg = LearnConfig::new(5, 1, 0.1, 23);
    cfg.graph = GraphSpec::Complete;
    cfg.rounds_per_edge = RoundsBudget::Fixed(1);
    let result = learn_order(&cfg, &mut env).unwrap();
    assert_eq!(result.s_hat, vec![0.0, -8.0, -4.0, -6.0, -2.0]);
    assert_eq!(result.sigma_hat.as_slice(), &[0, 4, 2, 3, 1]);
    assert!(result.unreachable.is_empty());
    assert_eq!(env.ground_truth_error(&result.s_hat).unwrap(), 0.0);
}

/// A clique whose sizes are multiples of the group size has no padding,
/// and the bottleneck value is the weakest clique's base weight.
#[test]
fn frozen_transitive_values() {
    let mut rows = vec![vec![0.0; 8]; 8];
    for (members, weight) in [(&[0usize, 1, 2, 3][..], 3.0), (&[4usize, 5, 6, 7][..], 7.0)] {
        for &i in members {
            for &j in members {
                if i != j {
                    rows[i][j] = weight;
                }
            }
        }
    }
    rows[4][5] = 9.0;
    rows[5][4] = 9.0;
    let w = CompatibilityMatrix::from_rows(rows).unwrap();
    for k in [2, 4] {
        let solution = transitive_mom(&w, k).unwrap();
        assert_eq!(solution.value, 3.0, "k={}", k);
        assert!(!solution.has_dummy_groups);
        let (_, brute) = brute_force_optimal(&w, k, ObjectiveKind::MoM).unwrap();
        assert_eq!(solution.value, brute);
    }
}

fn random_zero_diagonal(n: usize, rng: &mut ChaCha8Rng) -> CompatibilityMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.random_range(0.0..10.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    CompatibilityMatrix::from_rows(rows).unwrap()
}

/// The polynomial pair solvers re-derive exhaustive-search optima.
#[test]
fn pair_solvers_match_enumeration_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..25 {
        let w = random_zero_diagonal(6, &mut rng);
        let (_, avg) = solve_k2_avg(&w).unwrap();
        let (_, brute_aoa) = brute_force_optimal(&w, 2, ObjectiveKind::AoA).unwrap();
        assert_close(avg, brute_aoa, "aoa");
        let (_, mom) = solve_k2_min(&w, ObjectiveKind::MoM).unwrap();
        let (_, brute_mom) = brute_force_optimal(&w, 2, ObjectiveKind::MoM).unwrap();
        assert_close(mom, brute_mom, "mom");
    }
}

/// The matching engine re-derives exhaustive matching optima.
#[test]
fn matchings_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    for _ in 0..25 {
        let w = random_zero_diagonal(6, &mut rng);
        let fast = max_weight_perfect_matching(&w).unwrap();
        let slow = exhaustive_max_weight_perfect_matching(&w).unwrap();
        assert_close(fast.weight(), slow.weight(), "perfect matching weight");
    }
    for round in 0..25 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + round);
        let n = 7;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < 0.4 {
                    edges.push((u, v));
                }
            }
        }
        let fast = max_cardinality_matching(n, &edges).unwrap();
        assert_eq!(fast.len(), exhaustive_max_cardinality(n, &edges));
    }
}

/// An objective evaluation sanity anchor: the happiness identity on a
/// score vector with an awkward binary expansion.
#[test]
fn happiness_identity_anchor() {
    let s = ScoreVector::new(vec![0.1, 0.2, 0.7]).unwrap();
    let w = score_matrix(&s);
    let p = partilab::core::Partition::new(vec![vec![0, 1, 2]], 3, 3).unwrap();
    let total = 0.1f64 + 0.2 + 0.7;
    assert_close(
        evaluate_objective(&p, &w, ObjectiveKind::AoA).unwrap(),
        total * total / 9.0,
        "squared-mean identity",
    );
}
