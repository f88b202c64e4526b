//! Simulated feedback environment: hides a ground-truth score vector,
//! answers group queries with the group's happiness plus bounded zero-mean
//! noise, and meters query and round budgets.

use crate::core::{Permutation, ScoreVector};
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Additive noise applied to each happiness response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum NoiseModel {
    /// Responses are exact.
    None,
    /// Independent draws from `[-bound, bound]`, mean zero.
    Uniform { bound: f64 },
}

impl NoiseModel {
    /// The half-width `b` with responses in `[H - b, H + b]`.
    pub fn bound(&self) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Uniform { bound } => bound,
        }
    }

    fn validate(&self) -> Result<()> {
        let b = self.bound();
        if !b.is_finite() || b < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "noise bound must be finite and nonnegative, got {}",
                b
            )));
        }
        Ok(())
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Uniform { bound } => {
                if bound == 0.0 {
                    0.0
                } else {
                    rng.random_range(-bound..=bound)
                }
            }
        }
    }
}

/// Oblivious feedback oracle over a hidden score vector.
///
/// Each query names a group of `k` items and receives the group's happiness
/// under score-product compatibilities, `(sum of member scores)^2 / k^2`,
/// plus one fresh noise draw. Counters track groups queried and rounds
/// consumed; optional caps turn either counter into a hard budget.
#[derive(Debug, Clone)]
pub struct FeedbackEnv {
    s: ScoreVector,
    k: usize,
    noise: NoiseModel,
    rng: ChaCha8Rng,
    queries: u64,
    rounds: u64,
    max_queries: Option<u64>,
    max_rounds: Option<u64>,
    truth_visible: bool,
}

impl FeedbackEnv {
    /// Creates an environment answering size-`k` group queries against `s`.
    ///
    /// The group count per round is `n / k`, so `k` must divide the item
    /// count. Ground truth starts out visible for simulation metrics; call
    /// [`FeedbackEnv::hidden`] to withhold it.
    pub fn new(s: ScoreVector, k: usize, noise: NoiseModel, seed: u64) -> Result<Self> {
        noise.validate()?;
        let n = s.len();
        if k == 0 || n % k != 0 {
            return Err(Error::InvalidConfig(format!(
                "group size {} does not divide {} items",
                k, n
            )));
        }
        Ok(FeedbackEnv {
            s,
            k,
            noise,
            rng: ChaCha8Rng::seed_from_u64(seed),
            queries: 0,
            rounds: 0,
            max_queries: None,
            max_rounds: None,
            truth_visible: true,
        })
    }

    /// Withholds ground truth: error and ordering checks become errors.
    pub fn hidden(mut self) -> Self {
        self.truth_visible = false;
        self
    }

    /// Caps the total number of group queries.
    pub fn with_query_budget(mut self, max_queries: u64) -> Self {
        self.max_queries = Some(max_queries);
        self
    }

    /// Caps the total number of rounds.
    pub fn with_round_budget(mut self, max_rounds: u64) -> Self {
        self.max_rounds = Some(max_rounds);
        self
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Configured group size.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Groups that fit in one round.
    pub fn m(&self) -> usize {
        self.s.len() / self.k
    }

    /// Noise model in force.
    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    /// Group queries answered so far.
    pub fn queries_used(&self) -> u64 {
        self.queries
    }

    /// Rounds consumed so far.
    pub fn rounds_used(&self) -> u64 {
        self.rounds
    }

    /// Whether simulation metrics against the true scores are available.
    pub fn truth_visible(&self) -> bool {
        self.truth_visible
    }

    fn validate_group(&self, group: &[usize]) -> Result<()> {
        if group.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "group has {} items, expected {}",
                group.len(),
                self.k
            )));
        }
        let mut seen = vec![false; self.s.len()];
        for &item in group {
            if item >= self.s.len() {
                return Err(Error::InvalidInput(format!(
                    "item {} out of range for {} items",
                    item,
                    self.s.len()
                )));
            }
            if seen[item] {
                return Err(Error::InvalidInput(format!(
                    "item {} appears twice in the group",
                    item
                )));
            }
            seen[item] = true;
        }
        Ok(())
    }

    fn happiness_of(&self, group: &[usize]) -> f64 {
        let total: f64 = group.iter().map(|&i| self.s.get(i)).sum();
        let k = group.len() as f64;
        (total * total) / (k * k)
    }

    /// Answers one group query: happiness plus one fresh noise draw.
    pub fn query_group(&mut self, group: &[usize]) -> Result<f64> {
        self.validate_group(group)?;
        if let Some(cap) = self.max_queries {
            if self.queries >= cap {
                return Err(Error::BudgetExhausted(format!(
                    "query budget of {} exhausted",
                    cap
                )));
            }
        }
        self.queries += 1;
        Ok(self.happiness_of(group) + self.noise.draw(&mut self.rng))
    }

    /// Answers a batch of group queries issued together, charging
    /// `ceil(batch / m)` rounds for a batch of that many groups.
    pub fn query_round(&mut self, groups: &[Vec<usize>]) -> Result<Vec<f64>> {
        if groups.is_empty() {
            return Err(Error::InvalidInput("empty round".into()));
        }
        let charged = groups.len().div_ceil(self.m()) as u64;
        if let Some(cap) = self.max_rounds {
            if self.rounds + charged > cap {
                return Err(Error::BudgetExhausted(format!(
                    "round budget of {} exhausted",
                    cap
                )));
            }
        }
        let responses = groups
            .iter()
            .map(|g| self.query_group(g))
            .collect::<Result<Vec<f64>>>()?;
        self.rounds += charged;
        Ok(responses)
    }

    fn require_truth(&self) -> Result<()> {
        if !self.truth_visible {
            return Err(Error::TruthUnavailable(
                "ground truth is hidden in this environment".into(),
            ));
        }
        Ok(())
    }

    /// Relative L2 error of an estimate against the true scores, both
    /// shifted so the first item's score is 0.
    ///
    /// When the true scores are constant the reference norm is 0; the error
    /// is then 0 for an exactly-zero estimate and infinite otherwise.
    pub fn ground_truth_error(&self, s_hat: &[f64]) -> Result<f64> {
        self.require_truth()?;
        if s_hat.len() != self.s.len() {
            return Err(Error::InvalidInput(format!(
                "estimate has {} entries, expected {}",
                s_hat.len(),
                self.s.len()
            )));
        }
        let s1 = self.s.get(0);
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, &est) in s_hat.iter().enumerate() {
            let truth = self.s.get(i) - s1;
            num += (est - truth) * (est - truth);
            den += truth * truth;
        }
        if den == 0.0 {
            return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Ok((num / den).sqrt())
    }

    /// Whether an estimated ordering sorts the true scores weakly
    /// descending.
    pub fn ordering_correct(&self, sigma_hat: &Permutation) -> Result<bool> {
        self.require_truth()?;
        if sigma_hat.len() != self.s.len() {
            return Err(Error::InvalidInput(format!(
                "ordering has {} entries, expected {}",
                sigma_hat.len(),
                self.s.len()
            )));
        }
        let ok = (1..sigma_hat.len()).all(|r| {
            self.s.get(sigma_hat.item_at(r - 1)) >= self.s.get(sigma_hat.item_at(r))
        });
        Ok(ok)
    }

    /// The score gap `2k * s_min * gap_min - gap_min^2` controlling the
    /// sample complexity of ordering recovery; requires at least two items.
    pub fn true_delta(&self) -> Result<f64> {
        self.require_truth()?;
        let gap = self.s.min_gap().ok_or_else(|| {
            Error::InvalidInput("score gap needs at least two items".into())
        })?;
        let k = self.k as f64;
        Ok(2.0 * k * self.s.min_score() * gap - gap * gap)
    }

    /// The true scores; available only in simulation mode.
    pub fn true_scores(&self) -> Result<&ScoreVector> {
        self.require_truth()?;
        Ok(&self.s)
    }
}
