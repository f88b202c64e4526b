//! Query graphs for the ordering learner: sparse random generation, hop
//! diameter, and greedy proper edge coloring.

use crate::error::{Error, Result};
use rand::Rng;
use std::collections::VecDeque;

/// Simple undirected graph on nodes `0..n` with precomputed hop diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    diameter: usize,
}

impl QueryGraph {
    /// Builds a graph from an edge list; duplicate edges are collapsed.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one node".into()));
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop on node {}", u)));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) out of range for {} nodes",
                    u, v, n
                )));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        canonical.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &canonical {
            adj[u].push(v);
            adj[v].push(u);
        }
        for neighbors in &mut adj {
            neighbors.sort_unstable();
        }
        let diameter = largest_component_diameter(n, &adj);
        Ok(QueryGraph {
            n,
            edges: canonical,
            adj,
            diameter,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Longest shortest path, in hops, within the largest connected
    /// component (0 for an edgeless graph).
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn is_connected(&self) -> bool {
        bfs_distances(0, &self.adj).iter().all(|&d| d != usize::MAX)
    }
}

fn bfs_distances(start: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

fn largest_component_diameter(n: usize, adj: &[Vec<usize>]) -> usize {
    let mut component = vec![usize::MAX; n];
    let mut members_of: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = members_of.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        component[start] = id;
        while let Some(v) = queue.pop_front() {
            members.push(v);
            for &u in &adj[v] {
                if component[u] == usize::MAX {
                    component[u] = id;
                    queue.push_back(u);
                }
            }
        }
        members_of.push(members);
    }
    let largest = members_of
        .iter()
        .max_by_key(|m| m.len())
        .expect("n >= 1 gives at least one component");
    let mut diameter = 0;
    for &v in largest {
        let dist = bfs_distances(v, adj);
        for &u in largest {
            diameter = diameter.max(dist[u]);
        }
    }
    diameter
}

/// Sparse random graph with each edge present independently with
/// probability `ln(n)/n`, the usual connectivity threshold.
pub fn generate_er_graph(n: usize, rng: &mut impl Rng) -> Result<QueryGraph> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "random graph needs at least 2 nodes, got {}",
            n
        )));
    }
    generate_er_graph_with_p(n, (n as f64).ln() / n as f64, rng)
}

/// Random graph with an explicit edge probability.
pub fn generate_er_graph_with_p(n: usize, p: f64, rng: &mut impl Rng) -> Result<QueryGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!(
            "edge probability must lie in [0, 1], got {}",
            p
        )));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    QueryGraph::new(n, &edges)
}

/// Complete graph on `n` nodes.
pub fn complete_graph(n: usize) -> Result<QueryGraph> {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    QueryGraph::new(n, &edges)
}

/// Greedy proper edge coloring: every class is a matching, and at most
/// `2 * max_degree - 1` classes are used.
pub fn edge_coloring(g: &QueryGraph) -> Vec<Vec<(usize, usize)>> {
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut class_uses: Vec<Vec<bool>> = Vec::new();
    for &(u, v) in g.edges() {
        let color = (0..classes.len())
            .find(|&c| !class_uses[c][u] && !class_uses[c][v])
            .unwrap_or_else(|| {
                classes.push(Vec::new());
                class_uses.push(vec![false; g.n()]);
                classes.len() - 1
            });
        classes[color].push((u, v));
        class_uses[color][u] = true;
        class_uses[color][v] = true;
    }
    classes
}
