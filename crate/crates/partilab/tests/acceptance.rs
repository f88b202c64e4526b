//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line with its counts and tolerances before asserting.

use partilab::core::{
    evaluate_objective, score_matrix, CompatibilityMatrix, ObjectiveKind, Permutation, ScoreVector,
};
use partilab::general_solvers::{
    brute_force_optimal, exhaustive_max_cardinality, exhaustive_max_weight_perfect_matching,
    is_transitive, max_cardinality_matching, max_weight_perfect_matching, solve_k2_avg,
    solve_k2_min, transitive_mom,
};
use partilab::learner::{graph::generate_er_graph_with_p, learn_order, LearnConfig, RoundsBudget};
use partilab::score_solvers::{
    evaluate_scores, greedy_moa, heterophilous_partition, homophilous_partition,
};
use partilab::simenv::{FeedbackEnv, NoiseModel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn report(criterion: u32, ok: bool, detail: &str) {
    println!(
        "ACCEPTANCE {} {} {}",
        criterion,
        if ok { "PASS" } else { "FAIL" },
        detail
    );
    assert!(ok, "acceptance criterion {} failed: {}", criterion, detail);
}

/// Scores with entries U(0,10), redrawn until all pairwise gaps clear 1e-6.
fn distinct_scores(rng: &mut ChaCha8Rng, n: usize) -> ScoreVector {
    loop {
        let vals: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let s = ScoreVector::new(vals).unwrap();
        if s.min_gap().is_none_or(|g| g > 1e-6) {
            return s;
        }
    }
}

fn random_zero_diagonal(rng: &mut ChaCha8Rng, n: usize) -> CompatibilityMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(0.0..10.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    CompatibilityMatrix::from_rows(rows).unwrap()
}

#[test]
fn acceptance_1_homophilous_blocks_are_average_optimal() {
    let combos = [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3), (10, 2), (10, 5)];
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = 0usize;
    for trial in 0..500 {
        let (n, k) = combos[trial % combos.len()];
        let s = distinct_scores(&mut rng, n);
        let w = score_matrix(&s);
        let p = homophilous_partition(&s, k).unwrap();
        for kind in [ObjectiveKind::AoA, ObjectiveKind::AoM] {
            let got = evaluate_scores(&s, &p, kind).unwrap();
            let (_, best) = brute_force_optimal(&w, k, kind).unwrap();
            if (got - best).abs() > TOL {
                failures += 1;
            }
        }
    }
    report(
        1,
        failures == 0,
        &format!(
            "homophilous blocks matched brute-force AoA and AoM on {}/500 instances (tol 1e-9)",
            500 - failures.min(500)
        ),
    );
}

#[test]
fn acceptance_2_heterophilous_mix_is_bottleneck_optimal() {
    let combos = [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3), (10, 2), (10, 5)];
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut failures = 0usize;
    for trial in 0..500 {
        let (n, k) = combos[trial % combos.len()];
        let s = distinct_scores(&mut rng, n);
        let p = heterophilous_partition(&s, k).unwrap();
        let got = evaluate_scores(&s, &p, ObjectiveKind::MoM).unwrap();
        let (_, best) = brute_force_optimal(&score_matrix(&s), k, ObjectiveKind::MoM).unwrap();
        if (got - best).abs() > TOL {
            failures += 1;
        }
    }
    report(
        2,
        failures == 0,
        &format!(
            "heterophilous mix matched brute-force MoM on {}/500 instances (tol 1e-9)",
            500 - failures
        ),
    );
}

#[test]
fn acceptance_3_greedy_moa_stays_within_half_of_optimal() {
    let combos = [
        (4, 2),
        (6, 2),
        (6, 3),
        (8, 2),
        (8, 4),
        (9, 3),
        (10, 2),
        (12, 2),
        (12, 3),
        (12, 4),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut failures = 0usize;
    let mut worst_ratio = f64::INFINITY;
    for trial in 0..500 {
        let (n, k) = combos[trial % combos.len()];
        let s = distinct_scores(&mut rng, n);
        let p = greedy_moa(&s, k).unwrap();
        let got = evaluate_scores(&s, &p, ObjectiveKind::MoA).unwrap();
        let (_, best) = brute_force_optimal(&score_matrix(&s), k, ObjectiveKind::MoA).unwrap();
        let ratio = got / best;
        worst_ratio = worst_ratio.min(ratio);
        if got < 0.5 * best - 1e-12 {
            failures += 1;
        }
    }
    report(
        3,
        failures == 0,
        &format!(
            "greedy MoA reached at least half the optimum on {}/500 instances, worst ratio {:.4}",
            500 - failures,
            worst_ratio
        ),
    );
}

#[test]
fn acceptance_4_pair_solvers_are_exact() {
    let sizes = [6usize, 8, 10, 12];
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut failures = 0usize;
    for trial in 0..200 {
        let n = sizes[trial % sizes.len()];
        let w = random_zero_diagonal(&mut rng, n);
        let (avg_partition, avg_value) = solve_k2_avg(&w).unwrap();
        let checks = [
            (avg_value, ObjectiveKind::AoA),
            (
                evaluate_objective(&avg_partition, &w, ObjectiveKind::AoM).unwrap(),
                ObjectiveKind::AoM,
            ),
            (
                solve_k2_min(&w, ObjectiveKind::MoM).unwrap().1,
                ObjectiveKind::MoM,
            ),
            (
                solve_k2_min(&w, ObjectiveKind::MoA).unwrap().1,
                ObjectiveKind::MoA,
            ),
        ];
        for (got, kind) in checks {
            let (_, best) = brute_force_optimal(&w, 2, kind).unwrap();
            if (got - best).abs() > TOL {
                failures += 1;
            }
        }
    }
    report(
        4,
        failures == 0,
        &format!(
            "pair solvers matched brute force across AoA/AoM/MoM/MoA on {}/200 matrices (tol 1e-9)",
            200 - failures.min(200)
        ),
    );
}

#[test]
fn acceptance_5_clique_solver_is_exact_on_transitive_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut failures = 0usize;
    for trial in 0..100 {
        let k = if trial % 2 == 0 { 2 } else { 3 };
        let mut sizes = Vec::new();
        let mut total = 0usize;
        for _ in 0..rng.random_range(1..=3usize) {
            let size = k * rng.random_range(1..=2usize);
            if total + size <= 12 {
                sizes.push(size);
                total += size;
            }
        }
        if sizes.is_empty() {
            sizes.push(k);
            total = k;
        }
        let n = total;
        let mut rows = vec![vec![0.0; n]; n];
        let mut start = 0usize;
        for &size in &sizes {
            let base = rng.random_range(1.0..10.0);
            for i in start..start + size {
                for j in start..start + size {
                    if i != j {
                        rows[i][j] = base;
                    }
                }
            }
            if size >= 2 && rng.random_range(0..2) == 1 {
                let a = start + rng.random_range(0..size);
                let b = loop {
                    let b = start + rng.random_range(0..size);
                    if b != a {
                        break b;
                    }
                };
                let heavy = base + rng.random_range(0.5..5.0);
                rows[a][b] = heavy;
                rows[b][a] = heavy;
            }
            start += size;
        }
        let w = CompatibilityMatrix::from_rows(rows).unwrap();
        let solution = transitive_mom(&w, k).unwrap();
        let (_, best) = brute_force_optimal(&w, k, ObjectiveKind::MoM).unwrap();
        if !is_transitive(&w) || (solution.value - best).abs() > TOL {
            failures += 1;
        }
    }
    report(
        5,
        failures == 0,
        &format!(
            "clique solver matched brute-force MoM on {}/100 transitive instances (tol 1e-9)",
            100 - failures
        ),
    );
}

#[test]
fn acceptance_6_matchers_agree_with_exhaustive_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut failures = 0usize;
    for trial in 0..200 {
        let n = 3 + trial % 6;
        let g = loop {
            let p = rng.random_range(0.25..0.75);
            let g = generate_er_graph_with_p(n, p, &mut rng).unwrap();
            if g.is_connected() && g.edges().len() <= 18 {
                break g;
            }
        };
        let fast = max_cardinality_matching(n, g.edges()).unwrap().len();
        if fast != exhaustive_max_cardinality(n, g.edges()) {
            failures += 1;
        }
        if n % 2 == 0 {
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = rng.random_range(0.0..1.0);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let w = CompatibilityMatrix::from_rows(rows).unwrap();
            let fast = max_weight_perfect_matching(&w).unwrap().weight();
            let slow = exhaustive_max_weight_perfect_matching(&w).unwrap().weight();
            if (fast - slow).abs() > TOL {
                failures += 1;
            }
        }
    }
    report(
        6,
        failures == 0,
        &format!(
            "matchers agreed with exhaustive oracles on {}/200 sampled connected graphs (tol 1e-9)",
            200 - failures.min(200)
        ),
    );
}

#[test]
fn acceptance_7_noiseless_learning_recovers_the_exact_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut failures = 0usize;
    for seed in 0..50u64 {
        let vals: Vec<f64> = (0..16).map(|_| rng.random_range(1..=10) as f64).collect();
        let s = ScoreVector::new(vals.clone()).unwrap();
        let mut env = FeedbackEnv::new(s, 4, NoiseModel::None, 7_000 + seed).unwrap();
        let mut cfg = LearnConfig::new(16, 4, 0.1, 7_500 + seed);
        cfg.rounds_per_edge = RoundsBudget::Fixed(1);
        cfg.require_connected = true;
        let result = learn_order(&cfg, &mut env).unwrap();
        let expected = Permutation::from_scores_desc(&vals);
        let last = result.trace.last().unwrap();
        let exact = result.sigma_hat.as_slice() == expected.as_slice()
            && env.ground_truth_error(&result.s_hat).unwrap() == 0.0
            && last.normalized_error == Some(0.0)
            && last.ordering_correct == Some(true);
        if !exact {
            failures += 1;
        }
    }
    report(
        7,
        failures == 0,
        &format!(
            "noiseless runs recovered the exact ordering with error exactly 0 on {}/50 seeds",
            50 - failures
        ),
    );
}

#[test]
fn acceptance_8_auto_budget_meets_the_confidence_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut correct = 0usize;
    for seed in 0..200u64 {
        let mut pool: Vec<f64> = (1..=10).map(f64::from).collect();
        pool.shuffle(&mut rng);
        let vals: Vec<f64> = pool[..8].to_vec();
        let s = ScoreVector::new(vals).unwrap();
        let mut env =
            FeedbackEnv::new(s, 2, NoiseModel::Uniform { bound: 1.0 }, 8_000 + seed).unwrap();
        let mut cfg = LearnConfig::new(8, 2, 0.1, 8_500 + seed);
        cfg.noise_bound = 1.0;
        cfg.require_connected = true;
        let result = learn_order(&cfg, &mut env).unwrap();
        if env.ordering_correct(&result.sigma_hat).unwrap() {
            correct += 1;
        }
    }
    report(
        8,
        correct >= 170,
        &format!(
            "ordering exactly correct in {}/200 noisy auto-budget runs (threshold 170)",
            correct
        ),
    );
}

#[test]
fn acceptance_9_error_curve_improves_with_budget() {
    let budgets = [1usize, 4, 16, 64];
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut mean_errors = [0.0f64; 4];
    let mut max_rounds = [0u64; 4];
    for run in 0..30u64 {
        let vals: Vec<f64> = (0..16).map(|_| rng.random_range(1..=10) as f64).collect();
        for (slot, &r) in budgets.iter().enumerate() {
            let s = ScoreVector::new(vals.clone()).unwrap();
            let mut env =
                FeedbackEnv::new(s, 4, NoiseModel::Uniform { bound: 1.0 }, 9_000 + run).unwrap();
            let mut cfg = LearnConfig::new(16, 4, 0.1, 9_500 + run);
            cfg.rounds_per_edge = RoundsBudget::Fixed(r);
            cfg.noise_bound = 1.0;
            cfg.require_connected = true;
            let result = learn_order(&cfg, &mut env).unwrap();
            let last = result.trace.last().unwrap();
            mean_errors[slot] += last.normalized_error.unwrap() / 30.0;
            max_rounds[slot] = max_rounds[slot].max(result.rounds_used);
        }
    }
    let nonincreasing = mean_errors
        .windows(2)
        .all(|pair| pair[1] <= 1.05 * pair[0] + 1e-12);
    let hits_target = budgets
        .iter()
        .enumerate()
        .any(|(slot, _)| mean_errors[slot] <= 0.10 && max_rounds[slot] <= 10_000);
    report(
        9,
        nonincreasing && hits_target,
        &format!(
            "mean errors {:?} over budgets {:?} nonincreasing within 5% slack, \
             best {:.4} <= 0.10 within 10^4 rounds (max rounds used {:?})",
            mean_errors
                .iter()
                .map(|e| (e * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            budgets,
            mean_errors.iter().cloned().fold(f64::INFINITY, f64::min),
            max_rounds
        ),
    );
}
