//! External data ingestion: edge lists, per-node feature sets, and the
//! pipeline that turns them into per-item scores via subgraph sampling and
//! mean Jaccard similarity.

use crate::core::ScoreVector;
use crate::error::{Error, Result};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::Path;

/// Per-node feature token sets, keyed by node id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureTable {
    features: BTreeMap<String, BTreeSet<String>>,
}

impl FeatureTable {
    /// Loads a JSON object mapping node ids to arrays of feature tokens.
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let raw: BTreeMap<String, Vec<String>> = serde_json::from_str(&text)
            .map_err(|e| Error::Parse {
                line: e.line(),
                message: format!("invalid feature JSON: {}", e),
            })?;
        Ok(FeatureTable {
            features: raw
                .into_iter()
                .map(|(node, tokens)| (node, tokens.into_iter().collect()))
                .collect(),
        })
    }

    pub fn insert(&mut self, node: impl Into<String>, tokens: impl IntoIterator<Item = String>) {
        self.features.insert(node.into(), tokens.into_iter().collect());
    }

    pub fn get(&self, node: &str) -> Option<&BTreeSet<String>> {
        self.features.get(node)
    }

    pub fn contains(&self, node: &str) -> bool {
        self.features.contains_key(node)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Graph loaded from an edge list, nodes kept in first-appearance order.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<f64>>,
    adj: Vec<Vec<usize>>,
}

impl IngestGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Node ids in first-appearance order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id_of(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge weights parallel to [`IngestGraph::edges`]; present only when
    /// the source file carried weights.
    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }
}

/// Loads an edge list with one edge per line, either `u v` or `u,v[,w]`.
///
/// Duplicate edges collapse to the first occurrence; self-loops and
/// malformed lines are rejected with their line number.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<IngestGraph> {
    let text = std::fs::read_to_string(path)?;
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |id: &str, ids: &mut Vec<String>| -> usize {
        *index.entry(id.to_string()).or_insert_with(|| {
            ids.push(id.to_string());
            ids.len() - 1
        })
    };
    let mut edge_weight: BTreeMap<(usize, usize), Option<f64>> = BTreeMap::new();
    let mut any_weight = false;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if trimmed.contains(',') {
            trimmed.split(',').map(str::trim).collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        let (u_id, v_id, weight) = match fields.as_slice() {
            [u, v] => (*u, *v, None),
            [u, v, w] => {
                let w = parse_weight(w, line_no)?;
                (*u, *v, Some(w))
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected \"u v\" or \"u,v[,w]\", got {:?}", trimmed),
                })
            }
        };
        if u_id.is_empty() || v_id.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty node id".into(),
            });
        }
        if u_id == v_id {
            return Err(Error::InvalidInput(format!(
                "self-loop on node {:?} at line {}",
                u_id, line_no
            )));
        }
        let u = intern(u_id, &mut ids);
        let v = intern(v_id, &mut ids);
        any_weight |= weight.is_some();
        edge_weight.entry((u.min(v), u.max(v))).or_insert(weight);
    }
    let edges: Vec<(usize, usize)> = edge_weight.keys().copied().collect();
    let weights = if any_weight {
        Some(edge_weight.values().map(|w| w.unwrap_or(1.0)).collect())
    } else {
        None
    };
    let mut adj = vec![Vec::new(); ids.len()];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for neighbors in &mut adj {
        neighbors.sort_unstable();
    }
    Ok(IngestGraph {
        ids,
        index,
        edges,
        weights,
        adj,
    })
}

fn parse_weight(raw: &str, line: usize) -> Result<f64> {
    let w: f64 = raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid edge weight {:?}", raw),
    })?;
    if !w.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("edge weight {} is not finite", w),
        });
    }
    Ok(w)
}

fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let intersection = a.intersection(b).count();
    let union = a.len() + b.len() - intersection;
    if union == 0 {
        0.0
    } else {
        intersection as f64 / union as f64
    }
}

/// Scores each listed node by its mean Jaccard feature similarity to the
/// other listed nodes; pairs with an empty feature union contribute 0.
pub fn jaccard_scores(features: &FeatureTable, nodes: &[String]) -> Result<ScoreVector> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("no nodes to score".into()));
    }
    let sets: Vec<&BTreeSet<String>> = nodes
        .iter()
        .map(|node| {
            features.get(node).ok_or_else(|| {
                Error::InvalidInput(format!("node {:?} has no feature entry", node))
            })
        })
        .collect::<Result<_>>()?;
    let n = sets.len();
    let scores = (0..n)
        .map(|i| {
            if n == 1 {
                return 0.0;
            }
            let total: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| jaccard(sets[i], sets[j]))
                .sum();
            total / (n - 1) as f64
        })
        .collect();
    ScoreVector::new(scores)
}

/// Samples a connected induced subgraph of the requested size: a uniformly
/// random start among nodes whose component is large enough, then BFS with
/// ascending-index neighbor order until `size` nodes are collected.
///
/// Returns node ids in BFS visit order.
pub fn sample_subgraph(
    graph: &IngestGraph,
    size: usize,
    rng: &mut impl Rng,
) -> Result<Vec<String>> {
    let n = graph.node_count();
    if size == 0 || size > n {
        return Err(Error::InvalidInput(format!(
            "subgraph size {} not in 1..={}",
            size, n
        )));
    }
    let component_sizes = component_sizes(graph);
    let eligible: Vec<usize> = (0..n).filter(|&v| component_sizes[v] >= size).collect();
    if eligible.is_empty() {
        return Err(Error::Sampling(format!(
            "no connected component has {} nodes",
            size
        )));
    }
    let start = eligible[rng.random_range(0..eligible.len())];
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if order.len() == size {
            break;
        }
        for &u in graph.neighbors(v) {
            if !visited[u] {
                visited[u] = true;
                order.push(u);
                queue.push_back(u);
                if order.len() == size {
                    break;
                }
            }
        }
    }
    debug_assert_eq!(order.len(), size);
    Ok(order.into_iter().map(|v| graph.id_of(v).to_string()).collect())
}

fn component_sizes(graph: &IngestGraph) -> Vec<usize> {
    let n = graph.node_count();
    let mut component = vec![usize::MAX; n];
    let mut sizes: Vec<usize> = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut members = 0usize;
        let mut queue = VecDeque::from([start]);
        component[start] = id;
        while let Some(v) = queue.pop_front() {
            members += 1;
            for &u in graph.neighbors(v) {
                if component[u] == usize::MAX {
                    component[u] = id;
                    queue.push_back(u);
                }
            }
        }
        sizes.push(members);
    }
    (0..n).map(|v| sizes[component[v]]).collect()
}
