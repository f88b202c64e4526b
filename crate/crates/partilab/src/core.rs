//! Domain types and objective evaluation: compatibility matrices, score
//! vectors, fixed-size partitions, and the four grouping objectives.
//!
//! Items are indexed 0-based throughout the crate; file formats translate
//! to 1-based ids at the boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for floating-point optimality and symmetry checks.
pub const TOLERANCE: f64 = 1e-9;

/// Symmetric nonnegative matrix of pairwise compatibilities.
///
/// Diagonal entries are stored explicitly and participate in group
/// happiness. After the symmetry check (tolerance [`TOLERANCE`]) the lower
/// triangle is mirrored from the upper so lookups are exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CompatibilityMatrix {
    /// Builds a matrix from row-major entries of length `n * n`.
    pub fn new(n: usize, mut entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix must have at least one item".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                n * n,
                n,
                n,
                entries.len()
            )));
        }
        for (idx, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "entry ({},{}) is not finite",
                    idx / n,
                    idx % n
                )));
            }
            if v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "entry ({},{}) is negative: {}",
                    idx / n,
                    idx % n,
                    v
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let upper = entries[i * n + j];
                let lower = entries[j * n + i];
                if (upper - lower).abs() > TOLERANCE {
                    return Err(Error::InvalidInput(format!(
                        "asymmetric entries at ({},{}) vs ({},{}): {} vs {}",
                        i, j, j, i, upper, lower
                    )));
                }
                entries[j * n + i] = upper;
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from a list of equal-length rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Compatibility of items `i` and `j` (the stored diagonal when `i == j`).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Row `i` as a slice of length `n`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// Nonnegative per-item scores parametrizing a rank-one compatibility model.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    s: Vec<f64>,
}

impl ScoreVector {
    /// Validates that every score is finite and nonnegative.
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidInput("score vector must be nonempty".into()));
        }
        for (i, &v) in s.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("score {} is not finite", i)));
            }
            if v < 0.0 {
                return Err(Error::InvalidInput(format!("score {} is negative: {}", i, v)));
            }
        }
        Ok(Self { s })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.s[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }

    /// Smallest score.
    pub fn min_score(&self) -> f64 {
        self.s.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest gap `|s_i - s_j|` over distinct index pairs; `None` when
    /// there are fewer than two items.
    pub fn min_gap(&self) -> Option<f64> {
        if self.s.len() < 2 {
            return None;
        }
        let mut sorted = self.s.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("scores are finite"));
        Some(
            sorted
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min),
        )
    }

    /// Descending-score ordering with ties broken by ascending item index.
    pub fn argsort_desc(&self) -> Permutation {
        Permutation::from_scores_desc(&self.s)
    }
}

/// Bijection on item indices; `item_at(r)` is the item in rank position `r`
/// under descending score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    sigma: Vec<usize>,
}

impl Permutation {
    /// Validates that `sigma` is a bijection on `0..sigma.len()`.
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &item in &sigma {
            if item >= n {
                return Err(Error::InvalidInput(format!(
                    "permutation entry {} out of range for {} items",
                    item, n
                )));
            }
            if seen[item] {
                return Err(Error::InvalidInput(format!(
                    "permutation repeats item {}",
                    item
                )));
            }
            seen[item] = true;
        }
        Ok(Self { sigma })
    }

    /// Ranks items by descending score, ties broken by ascending index.
    pub fn from_scores_desc(scores: &[f64]) -> Self {
        let mut sigma: Vec<usize> = (0..scores.len()).collect();
        sigma.sort_by(|&a, &b| {
            scores[b]
                .partial_cmp(&scores[a])
                .expect("scores are finite")
                .then(a.cmp(&b))
        });
        Self { sigma }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// Item occupying rank position `rank` (0-based, 0 = highest score).
    #[inline]
    pub fn item_at(&self, rank: usize) -> usize {
        self.sigma[rank]
    }

    /// Rank position of `item`.
    pub fn rank_of(&self, item: usize) -> usize {
        self.sigma
            .iter()
            .position(|&x| x == item)
            .expect("item is in range")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sigma
    }
}

/// The four grouping objectives: average or minimum over groups of the
/// per-group average (happiness) or minimum pair compatibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    /// Average over groups of group happiness.
    AoA,
    /// Minimum over groups of the minimum pair compatibility.
    MoM,
    /// Average over groups of the minimum pair compatibility.
    AoM,
    /// Minimum over groups of group happiness.
    MoA,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 4] = [
        ObjectiveKind::AoA,
        ObjectiveKind::MoM,
        ObjectiveKind::AoM,
        ObjectiveKind::MoA,
    ];

    /// True for the two objectives built on minimum pair compatibility,
    /// which require groups of at least two items.
    pub fn uses_min_pair(self) -> bool {
        matches!(self, ObjectiveKind::MoM | ObjectiveKind::AoM)
    }
}

impl std::fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ObjectiveKind::AoA => "aoa",
            ObjectiveKind::MoM => "mom",
            ObjectiveKind::AoM => "aom",
            ObjectiveKind::MoA => "moa",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aoa" => Ok(ObjectiveKind::AoA),
            "mom" => Ok(ObjectiveKind::MoM),
            "aom" => Ok(ObjectiveKind::AoM),
            "moa" => Ok(ObjectiveKind::MoA),
            other => Err(Error::InvalidInput(format!(
                "unknown objective '{}', expected aoa|mom|aom|moa",
                other
            ))),
        }
    }
}

/// A named violation of the partition invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    /// A group does not have exactly `k` distinct items.
    GroupSize {
        group: usize,
        size: usize,
        expected: usize,
    },
    /// An item appears in more than one group position.
    Overlap { item: usize },
    /// The union of groups is not exactly `0..n`.
    Coverage {
        missing: Vec<usize>,
        out_of_range: Vec<usize>,
    },
}

impl std::fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartitionViolation::GroupSize {
                group,
                size,
                expected,
            } => write!(f, "group {} has {} items, expected {}", group, size, expected),
            PartitionViolation::Overlap { item } => {
                write!(f, "item {} appears more than once", item)
            }
            PartitionViolation::Coverage {
                missing,
                out_of_range,
            } => {
                write!(
                    f,
                    "coverage broken: missing {:?}, out of range {:?}",
                    missing, out_of_range
                )
            }
        }
    }
}

/// Checks the partition invariants for given `n` and `k` and returns every
/// violation found; an empty list means the groups form a valid partition.
pub fn validate_partition(groups: &[Vec<usize>], n: usize, k: usize) -> Vec<PartitionViolation> {
    let mut violations = Vec::new();
    for (g, group) in groups.iter().enumerate() {
        if group.len() != k {
            violations.push(PartitionViolation::GroupSize {
                group: g,
                size: group.len(),
                expected: k,
            });
        }
    }
    let mut counts = vec![0usize; n];
    let mut out_of_range = Vec::new();
    for group in groups {
        for &item in group {
            if item < n {
                counts[item] += 1;
            } else if !out_of_range.contains(&item) {
                out_of_range.push(item);
            }
        }
    }
    for (item, &c) in counts.iter().enumerate() {
        if c > 1 {
            violations.push(PartitionViolation::Overlap { item });
        }
    }
    let missing: Vec<usize> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .map(|(item, _)| item)
        .collect();
    out_of_range.sort_unstable();
    if !missing.is_empty() || !out_of_range.is_empty() {
        violations.push(PartitionViolation::Coverage {
            missing,
            out_of_range,
        });
    }
    violations
}

/// Division of `n` items into `m = n / k` disjoint groups of exactly `k`.
///
/// Stored in canonical form: items within a group ascend and groups are
/// ordered by their first element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    n: usize,
    k: usize,
}

impl Partition {
    /// Validates the groups against `n` and `k` and stores them in
    /// canonical order.
    pub fn new(groups: Vec<Vec<usize>>, n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("group size k must be positive".into()));
        }
        if n == 0 || n % k != 0 {
            return Err(Error::InvalidInput(format!(
                "item count {} is not a positive multiple of k={}",
                n, k
            )));
        }
        let violations = validate_partition(&groups, n, k);
        if !violations.is_empty() {
            let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidInput(format!(
                "invalid partition: {}",
                text.join("; ")
            )));
        }
        let mut groups = groups;
        for group in &mut groups {
            group.sort_unstable();
        }
        groups.sort_by_key(|g| g[0]);
        Ok(Self { groups, n, k })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of groups, `n / k`.
    pub fn m(&self) -> usize {
        self.groups.len()
    }
}

#[inline]
pub(crate) fn happiness_unchecked(set: &[usize], w: &CompatibilityMatrix) -> f64 {
    let mut sum = 0.0;
    for &i in set {
        for &j in set {
            sum += w.get(i, j);
        }
    }
    sum / ((set.len() * set.len()) as f64)
}

#[inline]
pub(crate) fn min_pair_unchecked(set: &[usize], w: &CompatibilityMatrix) -> f64 {
    let mut min = f64::INFINITY;
    for (a, &i) in set.iter().enumerate() {
        for &j in &set[a + 1..] {
            let v = w.get(i, j);
            if v < min {
                min = v;
            }
        }
    }
    min
}

fn check_set(set: &[usize], w: &CompatibilityMatrix) -> Result<()> {
    if set.is_empty() {
        return Err(Error::InvalidInput("item set must be nonempty".into()));
    }
    let mut seen = vec![false; w.n()];
    for &i in set {
        if i >= w.n() {
            return Err(Error::InvalidInput(format!(
                "item {} out of range for {} items",
                i,
                w.n()
            )));
        }
        if seen[i] {
            return Err(Error::InvalidInput(format!("item {} repeated in set", i)));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Happiness of a group: the sum of `W_ij` over all ordered item pairs of
/// `S` (diagonal included) divided by `|S|^2`.
///
/// For a matrix built by [`score_matrix`] this equals
/// `(sum of scores in S)^2 / |S|^2`.
pub fn happiness(set: &[usize], w: &CompatibilityMatrix) -> Result<f64> {
    check_set(set, w)?;
    Ok(happiness_unchecked(set, w))
}

/// Minimum compatibility over distinct unordered pairs of `S`.
pub fn min_pair(set: &[usize], w: &CompatibilityMatrix) -> Result<f64> {
    check_set(set, w)?;
    if set.len() < 2 {
        return Err(Error::InvalidInput(
            "minimum pair compatibility needs at least two items".into(),
        ));
    }
    Ok(min_pair_unchecked(set, w))
}

pub(crate) fn objective_of_groups(groups: &[Vec<usize>], w: &CompatibilityMatrix, kind: ObjectiveKind) -> f64 {
    let m = groups.len() as f64;
    match kind {
        ObjectiveKind::AoA => groups.iter().map(|g| happiness_unchecked(g, w)).sum::<f64>() / m,
        ObjectiveKind::MoA => groups
            .iter()
            .map(|g| happiness_unchecked(g, w))
            .fold(f64::INFINITY, f64::min),
        ObjectiveKind::AoM => groups.iter().map(|g| min_pair_unchecked(g, w)).sum::<f64>() / m,
        ObjectiveKind::MoM => groups
            .iter()
            .map(|g| min_pair_unchecked(g, w))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Evaluates one of the four objectives for a partition.
///
/// The minimum-pair objectives require `k >= 2`.
pub fn evaluate_objective(
    p: &Partition,
    w: &CompatibilityMatrix,
    kind: ObjectiveKind,
) -> Result<f64> {
    if p.n() != w.n() {
        return Err(Error::InvalidInput(format!(
            "partition covers {} items but matrix has {}",
            p.n(),
            w.n()
        )));
    }
    if kind.uses_min_pair() && p.k() < 2 {
        return Err(Error::InvalidInput(format!(
            "objective {} is undefined for singleton groups",
            kind
        )));
    }
    Ok(objective_of_groups(p.groups(), w, kind))
}

/// Rank-one compatibility matrix `W_ij = s_i * s_j`, diagonal `s_i^2`.
pub fn score_matrix(s: &ScoreVector) -> CompatibilityMatrix {
    let n = s.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = s.get(i) * s.get(j);
        }
    }
    CompatibilityMatrix { n, entries }
}
