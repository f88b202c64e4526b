//! Closed-form and greedy solvers for score-based compatibilities, where
//! the compatibility of two items is the product of their scores and a
//! group's happiness is the squared mean score of its members.

use crate::core::{
    evaluate_objective, score_matrix, ObjectiveKind, Partition, Permutation, ScoreVector,
};
use crate::error::{Error, Result};
use serde::Serialize;

/// Splits items into contiguous blocks of the descending score order.
///
/// Block `i` holds ranks `ik..(i+1)k`, so the highest scorers share a group
/// and so on down the order. This maximizes both the mean happiness and the
/// mean minimum compatibility over all partitions into groups of `k`.
pub fn homophilous_partition(s: &ScoreVector, k: usize) -> Result<Partition> {
    let (n, sigma) = checked_order(s, k)?;
    let groups = (0..n / k)
        .map(|g| (g * k..(g + 1) * k).map(|r| sigma.item_at(r)).collect())
        .collect();
    Partition::new(groups, n, k)
}

/// Pairs each run of high scorers with one low scorer.
///
/// Group `i` (1-based over `m` groups) takes ranks `(i-1)(k-1)..i(k-1)` of
/// the descending order plus rank `n-i`, mixing strong and weak items. This
/// maximizes the minimum group happiness over all partitions into groups of
/// `k`.
pub fn heterophilous_partition(s: &ScoreVector, k: usize) -> Result<Partition> {
    let (n, sigma) = checked_order(s, k)?;
    let m = n / k;
    let groups = (1..=m)
        .map(|i| {
            let mut group: Vec<usize> = ((i - 1) * (k - 1)..i * (k - 1))
                .map(|r| sigma.item_at(r))
                .collect();
            group.push(sigma.item_at(n - i));
            group
        })
        .collect();
    Partition::new(groups, n, k)
}

fn checked_order(s: &ScoreVector, k: usize) -> Result<(usize, Permutation)> {
    let n = s.len();
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidInput(format!(
            "group size {} does not divide {} items",
            k, n
        )));
    }
    Ok((n, s.argsort_desc()))
}

/// One assignment made by [`greedy_moa_traced`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyStep {
    /// 0-based position in the assignment order.
    pub step: usize,
    /// Item assigned at this step.
    pub item: usize,
    /// The item's score.
    pub score: f64,
    /// Group index the item joined.
    pub chosen_group: usize,
    /// Score total of every group before the assignment.
    pub totals_before: Vec<f64>,
    /// Size of every group before the assignment.
    pub sizes_before: Vec<usize>,
}

/// Greedy partition for the mean minimum compatibility objective.
///
/// Walks items in descending score order and drops each into the non-full
/// group with the smallest score total, lowest group index on ties. The
/// result attains at least half the optimal objective value.
pub fn greedy_moa(s: &ScoreVector, k: usize) -> Result<Partition> {
    Ok(greedy_moa_traced(s, k)?.0)
}

/// [`greedy_moa`] plus a per-assignment trace of the choices made.
pub fn greedy_moa_traced(s: &ScoreVector, k: usize) -> Result<(Partition, Vec<GreedyStep>)> {
    let (n, sigma) = checked_order(s, k)?;
    let m = n / k;
    let mut groups: Vec<Vec<usize>> = vec![Vec::with_capacity(k); m];
    let mut totals = vec![0.0f64; m];
    let mut trace = Vec::with_capacity(n);
    for step in 0..n {
        let item = sigma.item_at(step);
        let chosen = (0..m)
            .filter(|&g| groups[g].len() < k)
            .min_by(|&a, &b| totals[a].partial_cmp(&totals[b]).expect("finite totals"))
            .expect("some group is non-full before all items are placed");
        trace.push(GreedyStep {
            step,
            item,
            score: s.get(item),
            chosen_group: chosen,
            totals_before: totals.clone(),
            sizes_before: groups.iter().map(Vec::len).collect(),
        });
        groups[chosen].push(item);
        totals[chosen] += s.get(item);
    }
    Ok((Partition::new(groups, n, k)?, trace))
}

/// Evaluates an objective on a partition of score-based items.
pub fn evaluate_scores(s: &ScoreVector, p: &Partition, kind: ObjectiveKind) -> Result<f64> {
    evaluate_objective(p, &score_matrix(s), kind)
}
