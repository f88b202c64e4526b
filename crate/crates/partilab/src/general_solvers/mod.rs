//! Exact solvers for general compatibility matrices: exhaustive partition
//! enumeration, maximum weight and maximum cardinality matchings, the
//! pair-size reductions built on them, and the disjoint-clique fast path.

mod blossom;

use crate::core::{
    evaluate_objective, objective_of_groups, CompatibilityMatrix, ObjectiveKind, Partition,
};
use crate::error::{Error, Result};

/// Default limit on the number of partitions an exhaustive search may visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// A set of disjoint item pairs with their total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
    weight: f64,
}

impl Matching {
    fn from_mate(mate: &[usize], weight_of: impl Fn(usize, usize) -> f64) -> Self {
        let mut pairs = Vec::new();
        let mut weight = 0.0;
        for (v, &partner) in mate.iter().enumerate() {
            if partner != blossom::NONE && v < partner {
                pairs.push((v, partner));
                weight += weight_of(v, partner);
            }
        }
        Matching { pairs, weight }
    }

    /// Matched pairs `(i, j)` with `i < j`, ordered by `i`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Sum of pair weights.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Number of matched pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True when the matching covers all of `0..n`.
    pub fn is_perfect(&self, n: usize) -> bool {
        2 * self.pairs.len() == n
    }
}

/// Number of ways to split `n` items into groups of `k`, computed as a
/// product of binomials anchored on the lowest remaining item.
pub fn partition_count(n: usize, k: usize) -> Result<u128> {
    if k == 0 || n == 0 || n % k != 0 {
        return Err(Error::InvalidInput(format!(
            "cannot split {} items into groups of {}",
            n, k
        )));
    }
    let mut count: u128 = 1;
    let mut remaining = n;
    while remaining > 0 {
        let c = binomial(remaining - 1, k - 1)
            .and_then(|b| count.checked_mul(b))
            .ok_or_else(|| {
                Error::InstanceTooLarge(format!("partition count of ({}, {}) overflows", n, k))
            })?;
        count = c;
        remaining -= k;
    }
    Ok(count)
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.checked_mul(n - i)?;
        result /= i + 1;
    }
    Some(result)
}

struct PartitionEnumerator<'a, F> {
    n: usize,
    k: usize,
    used: Vec<bool>,
    groups: Vec<Vec<usize>>,
    visited: u64,
    visit: &'a mut F,
}

impl<F: FnMut(&[Vec<usize>])> PartitionEnumerator<'_, F> {
    fn next_group(&mut self) {
        let anchor = match self.used.iter().position(|&u| !u) {
            Some(a) => a,
            None => {
                self.visited += 1;
                (self.visit)(&self.groups);
                return;
            }
        };
        self.used[anchor] = true;
        self.groups.push(vec![anchor]);
        self.extend_group(anchor + 1, self.k - 1);
        self.groups.pop();
        self.used[anchor] = false;
    }

    fn extend_group(&mut self, start: usize, need: usize) {
        if need == 0 {
            self.next_group();
            return;
        }
        for i in start..=(self.n - need) {
            if self.used[i] {
                continue;
            }
            self.used[i] = true;
            self.groups.last_mut().unwrap().push(i);
            self.extend_group(i + 1, need - 1);
            self.groups.last_mut().unwrap().pop();
            self.used[i] = false;
        }
    }
}

/// Visits every way of splitting `0..n` into groups of `k` exactly once.
///
/// Each partition arrives in canonical form: groups ascend internally and
/// are ordered by their anchors (each group's anchor is the lowest item not
/// used by earlier groups). Returns the number of partitions visited.
pub(crate) fn for_each_partition<F: FnMut(&[Vec<usize>])>(n: usize, k: usize, visit: &mut F) -> u64 {
    let mut enumerator = PartitionEnumerator {
        n,
        k,
        used: vec![false; n],
        groups: Vec::with_capacity(n / k),
        visited: 0,
        visit,
    };
    enumerator.next_group();
    enumerator.visited
}

/// Exhaustively maximizes an objective over all k-partitions, visiting at
/// most `DEFAULT_ENUMERATION_CAP` partitions.
///
/// Among equal-value optima the canonically first partition is returned.
pub fn brute_force_optimal(
    w: &CompatibilityMatrix,
    k: usize,
    kind: ObjectiveKind,
) -> Result<(Partition, f64)> {
    brute_force_optimal_capped(w, k, kind, DEFAULT_ENUMERATION_CAP)
}

/// [`brute_force_optimal`] with an explicit partition-count cap.
pub fn brute_force_optimal_capped(
    w: &CompatibilityMatrix,
    k: usize,
    kind: ObjectiveKind,
    cap: u128,
) -> Result<(Partition, f64)> {
    let n = w.n();
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidInput(format!(
            "group size {} does not divide {} items",
            k, n
        )));
    }
    if kind.uses_min_pair() && k < 2 {
        return Err(Error::InvalidInput(format!(
            "objective {} is undefined for singleton groups",
            kind
        )));
    }
    let count = partition_count(n, k)?;
    if count > cap {
        return Err(Error::InstanceTooLarge(format!(
            "{} partitions exceed the cap of {}",
            count, cap
        )));
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_groups: Option<Vec<Vec<usize>>> = None;
    let visited = for_each_partition(n, k, &mut |groups| {
        let value = objective_of_groups(groups, w, kind);
        if value > best_value {
            best_value = value;
            best_groups = Some(groups.to_vec());
        }
    });
    debug_assert_eq!(u128::from(visited), count);
    let groups = best_groups.expect("at least one partition exists");
    Ok((Partition::new(groups, n, k)?, best_value))
}

/// Maximum weight perfect matching over all item pairs of `W`.
pub fn max_weight_perfect_matching(w: &CompatibilityMatrix) -> Result<Matching> {
    let n = w.n();
    if n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "perfect matching needs an even item count, got {}",
            n
        )));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j, w.get(i, j)));
        }
    }
    let mate = blossom::max_weight_matching(n, &edges, true);
    debug_assert!(mate.iter().all(|&p| p != blossom::NONE));
    Ok(Matching::from_mate(&mate, |i, j| w.get(i, j)))
}

/// Maximum cardinality matching of a simple undirected graph given as an
/// edge list on vertices `0..n`; duplicate edges are collapsed.
pub fn max_cardinality_matching(n: usize, edges: &[(usize, usize)]) -> Result<Matching> {
    let canonical = canonical_edges(n, edges)?;
    let weighted: Vec<(usize, usize, f64)> =
        canonical.iter().map(|&(i, j)| (i, j, 1.0)).collect();
    let mate = blossom::max_weight_matching(n, &weighted, true);
    Ok(Matching::from_mate(&mate, |_, _| 1.0))
}

fn canonical_edges(n: usize, edges: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let mut canonical = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop on vertex {}", u)));
        }
        if u >= n || v >= n {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) out of range for {} vertices",
                u, v, n
            )));
        }
        canonical.push((u.min(v), u.max(v)));
    }
    canonical.sort_unstable();
    canonical.dedup();
    Ok(canonical)
}

/// Optimal pair partition for the averaging objectives.
///
/// A maximum weight perfect matching maximizes both the mean happiness and
/// the mean pair compatibility at once; the returned value is the mean
/// happiness of the matching read as a partition.
pub fn solve_k2_avg(w: &CompatibilityMatrix) -> Result<(Partition, f64)> {
    let matching = max_weight_perfect_matching(w)?;
    let groups: Vec<Vec<usize>> = matching.pairs().iter().map(|&(i, j)| vec![i, j]).collect();
    let partition = Partition::new(groups, w.n(), 2)?;
    let value = evaluate_objective(&partition, w, ObjectiveKind::AoA)?;
    Ok((partition, value))
}

/// Optimal pair partition for the bottleneck objectives.
///
/// Sweeps the distinct effective pair weights (raw compatibility for the
/// minimum-pair objective, pair happiness for minimum happiness) and keeps
/// the largest threshold whose at-least-threshold subgraph still has a
/// perfect matching; feasibility is monotone, so a binary search suffices.
pub fn solve_k2_min(w: &CompatibilityMatrix, kind: ObjectiveKind) -> Result<(Partition, f64)> {
    if kind != ObjectiveKind::MoM && kind != ObjectiveKind::MoA {
        return Err(Error::InvalidInput(format!(
            "threshold sweep solves mom or moa, not {}",
            kind
        )));
    }
    let n = w.n();
    if n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "pair partition needs an even item count, got {}",
            n
        )));
    }
    let eff = |i: usize, j: usize| -> f64 {
        match kind {
            ObjectiveKind::MoM => w.get(i, j),
            _ => (w.get(i, i) + w.get(j, j) + 2.0 * w.get(i, j)) / 4.0,
        }
    };
    let mut thresholds = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            thresholds.push(eff(i, j));
        }
    }
    thresholds.sort_by(|a, b| a.partial_cmp(b).expect("weights are finite"));
    thresholds.dedup();

    let matching_at = |t: f64| -> Result<Matching> {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| eff(i, j) >= t)
            .collect();
        max_cardinality_matching(n, &edges)
    };

    // The lowest threshold keeps every pair, so it is always feasible.
    let mut lo = 0;
    let mut hi = thresholds.len() - 1;
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if matching_at(thresholds[mid])?.is_perfect(n) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let matching = matching_at(thresholds[lo])?;
    debug_assert!(matching.is_perfect(n));
    let groups: Vec<Vec<usize>> = matching.pairs().iter().map(|&(i, j)| vec![i, j]).collect();
    let partition = Partition::new(groups, n, 2)?;
    let value = evaluate_objective(&partition, w, kind)?;
    Ok((partition, value))
}

/// True when every pair is at least as compatible as the weaker leg of any
/// detour through a third item: `W_ij >= min(W_ik, W_kj)` for all triples.
pub fn is_transitive(w: &CompatibilityMatrix) -> bool {
    let n = w.n();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if w.get(i, j) < w.get(i, k).min(w.get(k, j)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Result of the disjoint-clique bottleneck solver.
#[derive(Debug, Clone)]
pub struct TransitiveMomSolution {
    /// Partition over the real items plus any padding items.
    pub partition: Partition,
    /// Number of real items; padding items have indices `n_real..`.
    pub n_real: usize,
    /// Indices of the padding items, ascending.
    pub dummy_items: Vec<usize>,
    /// Minimum pair compatibility over real pairs inside groups; 0 when no
    /// group holds two real items.
    pub value: f64,
    /// True when at least one group contains a padding item.
    pub has_dummy_groups: bool,
}

impl TransitiveMomSolution {
    /// Groups with padding items removed; entries may be shorter than `k`.
    pub fn real_groups(&self) -> Vec<Vec<usize>> {
        self.partition
            .groups()
            .iter()
            .map(|g| g.iter().copied().filter(|&i| i < self.n_real).collect())
            .collect()
    }
}

/// Bottleneck-optimal grouping when compatibilities are transitive.
///
/// Positive compatibilities then form disjoint cliques; zero entries count
/// as absent edges. Items are grouped only within their clique, each clique
/// padded to a multiple of `k` with fresh zero-compatibility items, and the
/// reported value ranges over real pairs only.
pub fn transitive_mom(w: &CompatibilityMatrix, k: usize) -> Result<TransitiveMomSolution> {
    if k < 2 {
        return Err(Error::InvalidInput(
            "bottleneck grouping needs k of at least 2".into(),
        ));
    }
    if !is_transitive(w) {
        return Err(Error::PreconditionViolated(
            "compatibility matrix is not transitive".into(),
        ));
    }
    let n = w.n();
    // Connected components over positive off-diagonal entries.
    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        component[start] = id;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for u in 0..n {
                if u != v && component[u] == usize::MAX && w.get(v, u) > 0.0 {
                    component[u] = id;
                    members.push(u);
                    queue.push(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }

    let mut groups = Vec::new();
    let mut dummy_items = Vec::new();
    let mut next_dummy = n;
    for members in &components {
        let mut padded = members.clone();
        while padded.len() % k != 0 {
            padded.push(next_dummy);
            dummy_items.push(next_dummy);
            next_dummy += 1;
        }
        for chunk in padded.chunks(k) {
            groups.push(chunk.to_vec());
        }
    }

    let mut value = f64::INFINITY;
    for group in &groups {
        let real: Vec<usize> = group.iter().copied().filter(|&i| i < n).collect();
        for (a, &i) in real.iter().enumerate() {
            for &j in &real[a + 1..] {
                value = value.min(w.get(i, j));
            }
        }
    }
    if value == f64::INFINITY {
        value = 0.0;
    }
    let has_dummy_groups = !dummy_items.is_empty();
    let partition = Partition::new(groups, next_dummy, k)?;
    Ok(TransitiveMomSolution {
        partition,
        n_real: n,
        dummy_items,
        value,
        has_dummy_groups,
    })
}

/// Exhaustive maximum weight perfect matching; exponential time, intended
/// as an independent oracle for small instances.
pub fn exhaustive_max_weight_perfect_matching(w: &CompatibilityMatrix) -> Result<Matching> {
    let n = w.n();
    if n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "perfect matching needs an even item count, got {}",
            n
        )));
    }
    fn search(
        w: &CompatibilityMatrix,
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        weight: f64,
        best: &mut (f64, Vec<(usize, usize)>),
    ) {
        let first = match used.iter().position(|&u| !u) {
            Some(f) => f,
            None => {
                if weight > best.0 {
                    *best = (weight, pairs.clone());
                }
                return;
            }
        };
        used[first] = true;
        for j in (first + 1)..used.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            pairs.push((first, j));
            search(w, used, pairs, weight + w.get(first, j), best);
            pairs.pop();
            used[j] = false;
        }
        used[first] = false;
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    search(w, &mut vec![false; n], &mut Vec::new(), 0.0, &mut best);
    let weight = best.0;
    Ok(Matching {
        pairs: best.1,
        weight,
    })
}

/// Exhaustive maximum weight matching over an edge list (any cardinality);
/// exponential time, intended as an independent oracle for small instances.
pub fn exhaustive_max_weight_matching(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    fn search(edges: &[(usize, usize, f64)], idx: usize, used: &mut Vec<bool>, weight: f64) -> f64 {
        if idx == edges.len() {
            return weight;
        }
        let (i, j, wt) = edges[idx];
        let mut best = search(edges, idx + 1, used, weight);
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            best = best.max(search(edges, idx + 1, used, weight + wt));
            used[i] = false;
            used[j] = false;
        }
        best
    }
    search(edges, 0, &mut vec![false; n], 0.0)
}

/// Exhaustive maximum cardinality matching size; exponential time, intended
/// as an independent oracle for small instances.
pub fn exhaustive_max_cardinality(n: usize, edges: &[(usize, usize)]) -> usize {
    fn search(edges: &[(usize, usize)], idx: usize, used: &mut Vec<bool>, size: usize) -> usize {
        if idx == edges.len() {
            return size;
        }
        let (i, j) = edges[idx];
        let mut best = search(edges, idx + 1, used, size);
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            best = best.max(search(edges, idx + 1, used, size + 1));
            used[i] = false;
            used[j] = false;
        }
        best
    }
    let canonical = canonical_edges(n, edges).expect("valid edge list");
    search(&canonical, 0, &mut vec![false; n], 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{score_matrix, ScoreVector, TOLERANCE};

    fn scores(s: &[f64]) -> CompatibilityMatrix {
        score_matrix(&ScoreVector::new(s.to_vec()).unwrap())
    }

    #[test]
    fn partition_counts_match_closed_form() {
        assert_eq!(partition_count(4, 2).unwrap(), 3);
        assert_eq!(partition_count(6, 2).unwrap(), 15);
        assert_eq!(partition_count(6, 3).unwrap(), 10);
        assert_eq!(partition_count(9, 3).unwrap(), 280);
        assert_eq!(partition_count(4, 4).unwrap(), 1);
    }

    #[test]
    fn enumeration_visits_each_partition_once() {
        for &(n, k, expected) in &[(4, 2, 3u64), (6, 2, 15), (6, 3, 10), (9, 3, 280)] {
            let mut seen = std::collections::HashSet::new();
            let visited = for_each_partition(n, k, &mut |groups| {
                assert!(seen.insert(groups.to_vec()), "duplicate {:?}", groups);
            });
            assert_eq!(visited, expected);
        }
    }

    #[test]
    fn brute_force_mom_small_instance() {
        let w = scores(&[4.0, 3.0, 2.0, 1.0]);
        let (p, value) = brute_force_optimal(&w, 2, ObjectiveKind::MoM).unwrap();
        assert_eq!(value, 4.0);
        assert_eq!(p.groups(), &[vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn brute_force_single_group() {
        let w = scores(&[1.0, 2.0, 3.0]);
        let (p, _) = brute_force_optimal(&w, 3, ObjectiveKind::AoA).unwrap();
        assert_eq!(p.groups(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn brute_force_constant_matrix_aom() {
        let c = 1.75;
        let mut entries = vec![c; 36];
        for i in 0..6 {
            entries[i * 6 + i] = 0.0;
        }
        let w = CompatibilityMatrix::new(6, entries).unwrap();
        for k in [2, 3] {
            let (_, value) = brute_force_optimal(&w, k, ObjectiveKind::AoM).unwrap();
            assert!((value - c).abs() < TOLERANCE);
        }
    }

    #[test]
    fn brute_force_respects_cap() {
        let w = scores(&[1.0; 12]);
        let err = brute_force_optimal_capped(&w, 2, ObjectiveKind::AoA, 100).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge(_)));
    }

    #[test]
    fn perfect_matching_prefers_heavy_pairs() {
        let w = scores(&[4.0, 3.0, 2.0, 1.0]);
        let m = max_weight_perfect_matching(&w).unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
        assert!((m.weight() - 14.0).abs() < TOLERANCE);
    }

    #[test]
    fn perfect_matching_two_items() {
        let w = scores(&[2.0, 5.0]);
        let m = max_weight_perfect_matching(&w).unwrap();
        assert_eq!(m.pairs(), &[(0, 1)]);
    }

    #[test]
    fn perfect_matching_on_cycle_weights() {
        // Cycle 0-1-2-3 with unit edges and zero chords.
        let mut entries = vec![0.0; 16];
        for &(i, j) in &[(0usize, 1usize), (1, 2), (2, 3), (3, 0)] {
            entries[i * 4 + j] = 1.0;
            entries[j * 4 + i] = 1.0;
        }
        let w = CompatibilityMatrix::new(4, entries).unwrap();
        let m = max_weight_perfect_matching(&w).unwrap();
        assert!((m.weight() - 2.0).abs() < TOLERANCE);
    }

    #[test]
    fn perfect_matching_rejects_odd_n() {
        let w = scores(&[1.0, 2.0, 3.0]);
        assert!(max_weight_perfect_matching(&w).is_err());
    }

    #[test]
    fn cardinality_matching_examples() {
        // Triangle: odd cycle, one pair.
        let m = max_cardinality_matching(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(m.len(), 1);
        // Path on four vertices: two pairs.
        let m = max_cardinality_matching(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn cardinality_matching_petersen() {
        let edges = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (5, 7),
            (7, 9),
            (9, 6),
            (6, 8),
            (8, 5),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
        ];
        let m = max_cardinality_matching(10, &edges).unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(exhaustive_max_cardinality(10, &edges), 5);
    }

    #[test]
    fn cardinality_matching_rejects_self_loops() {
        assert!(max_cardinality_matching(2, &[(1, 1)]).is_err());
    }

    #[test]
    fn k2_avg_recovers_sorted_pairs() {
        let w = scores(&[4.0, 3.0, 2.0, 1.0]);
        let (p, value) = solve_k2_avg(&w).unwrap();
        assert_eq!(p.groups(), &[vec![0, 1], vec![2, 3]]);
        let (_, brute) = brute_force_optimal(&w, 2, ObjectiveKind::AoA).unwrap();
        assert!((value - brute).abs() < TOLERANCE);
    }

    #[test]
    fn k2_avg_equal_weights_matches_brute_force() {
        let mut entries = vec![3.0; 16];
        for i in 0..4 {
            entries[i * 4 + i] = 0.0;
        }
        let w = CompatibilityMatrix::new(4, entries).unwrap();
        let (_, value) = solve_k2_avg(&w).unwrap();
        let (_, brute) = brute_force_optimal(&w, 2, ObjectiveKind::AoA).unwrap();
        assert!((value - brute).abs() < TOLERANCE);
    }

    #[test]
    fn k2_min_mom_matches_bottom_pairing() {
        let w = scores(&[4.0, 3.0, 2.0, 1.0]);
        let (_, value) = solve_k2_min(&w, ObjectiveKind::MoM).unwrap();
        assert_eq!(value, 4.0);
    }

    #[test]
    fn k2_min_forced_pairs() {
        // Two heavy pairs (0,1) and (2,3); all cross pairs are zero.
        let mut entries = vec![0.0; 16];
        entries[1] = 9.0;
        entries[4] = 9.0;
        entries[2 * 4 + 3] = 7.0;
        entries[3 * 4 + 2] = 7.0;
        let w = CompatibilityMatrix::new(4, entries).unwrap();
        let (p, value) = solve_k2_min(&w, ObjectiveKind::MoM).unwrap();
        assert_eq!(value, 7.0);
        assert_eq!(p.groups(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn k2_min_rejects_average_objectives() {
        let w = scores(&[1.0, 2.0]);
        assert!(solve_k2_min(&w, ObjectiveKind::AoA).is_err());
    }

    #[test]
    fn transitivity_detection() {
        assert!(is_transitive(&scores(&[2.0, 2.0, 2.0])));

        // Two disjoint constant cliques.
        let mut entries = vec![0.0; 36];
        for group in [[0usize, 1, 2], [3, 4, 5]] {
            for &i in &group {
                for &j in &group {
                    if i != j {
                        entries[i * 6 + j] = 4.0;
                    }
                }
            }
        }
        let w = CompatibilityMatrix::new(6, entries).unwrap();
        assert!(is_transitive(&w));

        let w = CompatibilityMatrix::from_rows(vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(!is_transitive(&w));
    }

    #[test]
    fn transitive_mom_two_cliques() {
        let mut entries = vec![0.0; 36];
        for group in [[0usize, 1, 2], [3, 4, 5]] {
            for &i in &group {
                for &j in &group {
                    if i != j {
                        entries[i * 6 + j] = 5.0;
                    }
                }
            }
        }
        let w = CompatibilityMatrix::new(6, entries).unwrap();
        let solution = transitive_mom(&w, 3).unwrap();
        assert_eq!(solution.value, 5.0);
        assert!(!solution.has_dummy_groups);
        let (_, brute) = brute_force_optimal(&w, 3, ObjectiveKind::MoM).unwrap();
        assert_eq!(solution.value, brute);
    }

    #[test]
    fn transitive_mom_single_heavier_edge() {
        // One 4-clique of weight 2 with edge (0,1) raised to 3.
        let mut entries = vec![0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    entries[i * 4 + j] = 2.0;
                }
            }
        }
        entries[1] = 3.0;
        entries[4] = 3.0;
        let w = CompatibilityMatrix::new(4, entries).unwrap();
        assert!(is_transitive(&w));
        let solution = transitive_mom(&w, 2).unwrap();
        assert_eq!(solution.value, 2.0);
        let (_, brute) = brute_force_optimal(&w, 2, ObjectiveKind::MoM).unwrap();
        assert_eq!(solution.value, brute);
    }

    #[test]
    fn transitive_mom_uniform_component() {
        let mut entries = vec![1.5; 16];
        for i in 0..4 {
            entries[i * 4 + i] = 0.0;
        }
        let w = CompatibilityMatrix::new(4, entries).unwrap();
        for k in [2, 4] {
            assert_eq!(transitive_mom(&w, k).unwrap().value, 1.5);
        }
    }

    #[test]
    fn transitive_mom_pads_components() {
        // A 3-clique and an isolated item, k=2: both need padding.
        let mut entries = vec![0.0; 16];
        for &i in &[0usize, 1, 2] {
            for &j in &[0usize, 1, 2] {
                if i != j {
                    entries[i * 4 + j] = 2.0;
                }
            }
        }
        let w = CompatibilityMatrix::new(4, entries).unwrap();
        let solution = transitive_mom(&w, 2).unwrap();
        assert_eq!(solution.n_real, 4);
        assert_eq!(solution.dummy_items.len(), 2);
        assert!(solution.has_dummy_groups);
        assert_eq!(solution.value, 2.0);
        let reals: Vec<usize> = solution.real_groups().into_iter().flatten().collect();
        assert_eq!(reals.len(), 4);
    }

    #[test]
    fn transitive_mom_rejects_intransitive_input() {
        let w = CompatibilityMatrix::from_rows(vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(matches!(
            transitive_mom(&w, 2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn exhaustive_oracles_agree_on_small_instances() {
        let w = scores(&[4.0, 3.0, 2.0, 1.0]);
        let blossom = max_weight_perfect_matching(&w).unwrap();
        let oracle = exhaustive_max_weight_perfect_matching(&w).unwrap();
        assert!((blossom.weight() - oracle.weight()).abs() < TOLERANCE);

        let edges = [(0, 1, 2.0), (1, 2, 3.0), (2, 3, 2.0), (3, 0, 1.0)];
        let oracle = exhaustive_max_weight_matching(4, &edges);
        assert!((oracle - 4.0).abs() < TOLERANCE);
    }
}
