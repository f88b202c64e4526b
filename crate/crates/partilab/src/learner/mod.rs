//! Ordering learner: schedules paired group queries along a random graph,
//! turns noisy happiness feedback into pairwise score differences, and
//! propagates them into an estimated score ordering.

pub mod graph;

use crate::core::Permutation;
use crate::error::{Error, Result};
use crate::simenv::FeedbackEnv;
use graph::{complete_graph, edge_coloring, generate_er_graph, generate_er_graph_with_p, QueryGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// How the query graph is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "p")]
pub enum GraphSpec {
    /// Sparse random graph at the connectivity-threshold density.
    ErDefault,
    /// Random graph with an explicit edge probability.
    ErWithP(f64),
    /// All node pairs.
    Complete,
}

/// Per-edge query budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundsBudget {
    /// Derive the budget from the confidence target and score gap.
    Auto,
    /// Query each edge arm this many times.
    Fixed(usize),
}

/// Configuration of one learning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnConfig {
    /// Item count; must equal `m * k`.
    pub n: usize,
    /// Groups per round.
    pub m: usize,
    /// Group size.
    pub k: usize,
    /// Target failure probability for ordering recovery.
    pub delta: f64,
    /// Per-edge repetition budget.
    pub rounds_per_edge: RoundsBudget,
    /// Caller's guess of the score gap when ground truth is hidden.
    pub delta_guess: Option<f64>,
    /// Noise half-width the budget is sized for.
    pub noise_bound: f64,
    /// Seed for graph sampling.
    pub seed: u64,
    /// Query graph family.
    pub graph: GraphSpec,
    /// Resample the graph until it is connected.
    pub require_connected: bool,
    /// Leading constant in the auto budget formula.
    pub sample_constant: f64,
}

impl LearnConfig {
    /// A config with the common defaults: auto budget, threshold-density
    /// random graph, no connectivity requirement, constant 8.
    pub fn new(n: usize, k: usize, delta: f64, seed: u64) -> Self {
        LearnConfig {
            n,
            m: if k == 0 { 0 } else { n / k },
            k,
            delta,
            rounds_per_edge: RoundsBudget::Auto,
            delta_guess: None,
            noise_bound: 0.0,
            seed,
            graph: GraphSpec::ErDefault,
            require_connected: false,
            sample_constant: 8.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.m == 0 || self.n != self.m * self.k {
            return Err(Error::InvalidConfig(format!(
                "need n = m * k, got n={} m={} k={}",
                self.n, self.m, self.k
            )));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig("need at least 2 items".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "failure probability must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if let RoundsBudget::Fixed(r) = self.rounds_per_edge {
            if r == 0 {
                return Err(Error::InvalidConfig(
                    "explicit rounds_per_edge must be at least 1".into(),
                ));
            }
        }
        if !self.noise_bound.is_finite() || self.noise_bound < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "noise bound must be finite and nonnegative, got {}",
                self.noise_bound
            )));
        }
        if !self.sample_constant.is_finite() || self.sample_constant <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sample constant must be positive, got {}",
                self.sample_constant
            )));
        }
        if let GraphSpec::ErWithP(p) = self.graph {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "edge probability must lie in [0, 1], got {}",
                    p
                )));
            }
        }
        Ok(())
    }
}

/// Which side of an edge a query estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    /// Anchored at the edge's lower-index node.
    Left,
    /// Anchored at the edge's higher-index node.
    Right,
}

/// One scheduled group query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduledQuery {
    /// Edge this query serves, as `(u, v)` with `u < v`.
    pub edge: (usize, usize),
    pub arm: Arm,
    /// Node whose score this arm isolates.
    pub anchor: usize,
    /// The `k - 1` companions shared by both arms of the edge.
    pub companions: Vec<usize>,
}

impl ScheduledQuery {
    /// The queried group: anchor followed by companions.
    pub fn group(&self) -> Vec<usize> {
        let mut g = Vec::with_capacity(self.companions.len() + 1);
        g.push(self.anchor);
        g.extend_from_slice(&self.companions);
        g
    }
}

/// Deterministic round-by-round query plan for a graph and config.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySchedule {
    rounds: Vec<Vec<ScheduledQuery>>,
    rounds_per_edge: usize,
}

impl QuerySchedule {
    pub fn rounds(&self) -> &[Vec<ScheduledQuery>] {
        &self.rounds
    }

    pub fn rounds_per_edge(&self) -> usize {
        self.rounds_per_edge
    }

    /// Total group queries across all rounds.
    pub fn total_queries(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}

/// The fixed companion set for an edge: the first `k - 1` nodes outside it.
fn companions(n: usize, k: usize, u: usize, v: usize) -> Vec<usize> {
    (0..n).filter(|&x| x != u && x != v).take(k - 1).collect()
}

/// Plans paired arm queries for every edge: color classes are cut into
/// bins of at most `m` edges, and each bin repetition queries all left
/// arms in one round and all right arms in the next.
pub fn build_schedule(
    g: &QueryGraph,
    cfg: &LearnConfig,
    rounds_per_edge: usize,
) -> Result<QuerySchedule> {
    cfg.validate()?;
    if g.n() != cfg.n {
        return Err(Error::InvalidConfig(format!(
            "graph has {} nodes, config expects {}",
            g.n(),
            cfg.n
        )));
    }
    if cfg.k - 1 > cfg.n - 2 {
        return Err(Error::InvalidConfig(format!(
            "companion sets need k - 1 <= n - 2, got k={} n={}",
            cfg.k, cfg.n
        )));
    }
    if rounds_per_edge == 0 {
        return Err(Error::InvalidConfig(
            "rounds_per_edge must be at least 1".into(),
        ));
    }
    let mut rounds = Vec::new();
    for class in edge_coloring(g) {
        for bin in class.chunks(cfg.m) {
            for _ in 0..rounds_per_edge {
                let arm_round = |arm: Arm| -> Vec<ScheduledQuery> {
                    bin.iter()
                        .map(|&(u, v)| ScheduledQuery {
                            edge: (u, v),
                            arm,
                            anchor: if arm == Arm::Left { u } else { v },
                            companions: companions(cfg.n, cfg.k, u, v),
                        })
                        .collect()
                };
                rounds.push(arm_round(Arm::Left));
                rounds.push(arm_round(Arm::Right));
            }
        }
    }
    Ok(QuerySchedule {
        rounds,
        rounds_per_edge,
    })
}

pub(crate) fn rounds_raw(diam: usize, score_gap: f64, cfg: &LearnConfig) -> f64 {
    let delta_star = (1.0 - (-cfg.delta / cfg.k as f64).exp()) / cfg.m as f64;
    let b = cfg.noise_bound;
    let d = diam as f64;
    cfg.sample_constant * b * b * d * d / (score_gap * score_gap) * (1.0 / delta_star).ln()
}

/// Per-edge repetition budget sufficient for ordering recovery with
/// probability `1 - delta`, given the graph diameter and the score gap.
pub fn rounds_per_edge_auto(diam: usize, score_gap: f64, cfg: &LearnConfig) -> Result<usize> {
    cfg.validate()?;
    if !score_gap.is_finite() || score_gap <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "score gap must be positive, got {}",
            score_gap
        )));
    }
    let raw = rounds_raw(diam, score_gap, cfg);
    if raw > 1e12 {
        return Err(Error::InvalidConfig(format!(
            "computed rounds_per_edge {:.3e} is impractically large",
            raw
        )));
    }
    Ok((raw.ceil() as usize).max(1))
}

/// Averages paired arm responses into an estimate of the score difference
/// `s_u - s_v` for the edge `(u, v)`.
///
/// Each response estimates the squared mean score of a size-`k` group, so
/// `k^2` times it estimates the squared group score sum; the square roots
/// of the two arms differ by exactly the anchor score difference when
/// noise is absent. Negative radicands are clamped to zero.
pub fn estimate_edge_diff(k: usize, left: &[f64], right: &[f64]) -> Result<f64> {
    if left.is_empty() || left.len() != right.len() {
        return Err(Error::InvalidInput(format!(
            "arms need equal nonzero response counts, got {} and {}",
            left.len(),
            right.len()
        )));
    }
    let kk = (k * k) as f64;
    let root = |h: f64| (kk * h).max(0.0).sqrt();
    let total: f64 = left
        .iter()
        .zip(right)
        .map(|(&l, &r)| root(l) - root(r))
        .sum();
    Ok(total / left.len() as f64)
}

/// Integrates per-edge score differences into absolute scores.
///
/// Node 0 is pinned to 0 and every other node takes the telescoped sum
/// along its BFS shortest path from node 0, neighbors visited in ascending
/// order. Nodes unreachable from node 0 are set to 0 and reported.
pub fn propagate_scores(
    g: &QueryGraph,
    diffs: &HashMap<(usize, usize), f64>,
) -> Result<(Vec<f64>, Vec<usize>)> {
    for &edge in g.edges() {
        if !diffs.contains_key(&edge) {
            return Err(Error::InvalidInput(format!(
                "no difference estimate for edge ({}, {})",
                edge.0, edge.1
            )));
        }
    }
    let n = g.n();
    let mut s_hat = vec![0.0f64; n];
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if visited[u] {
                continue;
            }
            visited[u] = true;
            let d = if v < u {
                diffs[&(v, u)]
            } else {
                -diffs[&(u, v)]
            };
            s_hat[u] = s_hat[v] - d;
            queue.push_back(u);
        }
    }
    let unreachable = (0..n).filter(|&v| !visited[v]).collect();
    Ok((s_hat, unreachable))
}

/// One row of the per-round learning trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    /// 1-based round number.
    pub round: u64,
    /// Group queries issued through this round.
    pub cumulative_queries: u64,
    /// Relative L2 score error; absent when ground truth is hidden.
    pub normalized_error: Option<f64>,
    /// Whether the running ordering sorts the true scores; absent when
    /// ground truth is hidden.
    pub ordering_correct: Option<bool>,
}

/// Output of a learning run.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnResult {
    /// Estimated ordering, best item first.
    pub sigma_hat: Permutation,
    /// Estimated scores in the node-0-equals-0 gauge.
    pub s_hat: Vec<f64>,
    /// Rounds consumed.
    pub rounds_used: u64,
    /// Resolved per-edge repetition budget.
    pub rounds_per_edge: usize,
    /// Edge count of the query graph.
    pub graph_edges: usize,
    /// Hop diameter of the query graph's largest component.
    pub graph_diameter: usize,
    /// Nodes with no path from node 0, scored 0.
    pub unreachable: Vec<usize>,
    /// Per-round progress records.
    pub trace: Vec<TraceRow>,
}

fn sample_graph(cfg: &LearnConfig) -> Result<QueryGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draw = |rng: &mut ChaCha8Rng| match cfg.graph {
        GraphSpec::ErDefault => generate_er_graph(cfg.n, rng),
        GraphSpec::ErWithP(p) => generate_er_graph_with_p(cfg.n, p, rng),
        GraphSpec::Complete => complete_graph(cfg.n),
    };
    if !cfg.require_connected {
        return draw(&mut rng);
    }
    const MAX_ATTEMPTS: usize = 200;
    for _ in 0..MAX_ATTEMPTS {
        let g = draw(&mut rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Sampling(format!(
        "no connected graph in {} draws; the configured density may be too low",
        MAX_ATTEMPTS
    )))
}

/// Runs the full learning pipeline against a feedback environment: sample
/// a query graph, schedule paired arm queries, estimate per-edge score
/// differences, propagate them from node 0, and argsort the result.
///
/// The trace gains one row per round; error and ordering columns are
/// filled whenever the environment exposes ground truth.
pub fn learn_order(cfg: &LearnConfig, env: &mut FeedbackEnv) -> Result<LearnResult> {
    cfg.validate()?;
    if env.n() != cfg.n || env.k() != cfg.k {
        return Err(Error::InvalidConfig(format!(
            "environment shape ({}, {}) does not match config ({}, {})",
            env.n(),
            env.k(),
            cfg.n,
            cfg.k
        )));
    }
    let g = sample_graph(cfg)?;
    let rounds_per_edge = match cfg.rounds_per_edge {
        RoundsBudget::Fixed(r) => r,
        RoundsBudget::Auto => {
            let gap = match cfg.delta_guess {
                Some(gap) => gap,
                None => env.true_delta()?,
            };
            rounds_per_edge_auto(g.diameter(), gap, cfg)?
        }
    };
    let schedule = build_schedule(&g, cfg, rounds_per_edge)?;

    let mut responses: HashMap<(usize, usize), (Vec<f64>, Vec<f64>)> =
        g.edges().iter().map(|&e| (e, (Vec::new(), Vec::new()))).collect();
    let mut trace = Vec::with_capacity(schedule.rounds().len());
    let mut cumulative_queries = 0u64;
    for (round_idx, round) in schedule.rounds().iter().enumerate() {
        let groups: Vec<Vec<usize>> = round.iter().map(ScheduledQuery::group).collect();
        let answers = env.query_round(&groups)?;
        cumulative_queries += answers.len() as u64;
        for (query, answer) in round.iter().zip(answers) {
            let entry = responses.get_mut(&query.edge).expect("scheduled edge");
            match query.arm {
                Arm::Left => entry.0.push(answer),
                Arm::Right => entry.1.push(answer),
            }
        }
        let (normalized_error, ordering_correct) = if env.truth_visible() {
            let (s_hat, _) = propagate_scores(&g, &running_diffs(cfg.k, &responses)?)?;
            let sigma = Permutation::from_scores_desc(&s_hat);
            (
                Some(env.ground_truth_error(&s_hat)?),
                Some(env.ordering_correct(&sigma)?),
            )
        } else {
            (None, None)
        };
        trace.push(TraceRow {
            round: (round_idx + 1) as u64,
            cumulative_queries,
            normalized_error,
            ordering_correct,
        });
    }

    let (s_hat, unreachable) = propagate_scores(&g, &running_diffs(cfg.k, &responses)?)?;
    let sigma_hat = Permutation::from_scores_desc(&s_hat);
    Ok(LearnResult {
        sigma_hat,
        s_hat,
        rounds_used: schedule.rounds().len() as u64,
        rounds_per_edge,
        graph_edges: g.edges().len(),
        graph_diameter: g.diameter(),
        unreachable,
        trace,
    })
}

/// Difference estimates from whatever paired responses exist so far;
/// edges with no complete pair yet contribute 0.
fn running_diffs(
    k: usize,
    responses: &HashMap<(usize, usize), (Vec<f64>, Vec<f64>)>,
) -> Result<HashMap<(usize, usize), f64>> {
    responses
        .iter()
        .map(|(&edge, (left, right))| {
            let paired = left.len().min(right.len());
            let diff = if paired == 0 {
                0.0
            } else {
                estimate_edge_diff(k, &left[..paired], &right[..paired])?
            };
            Ok((edge, diff))
        })
        .collect()
}
