//! The `ingest` subcommand: sample a connected subgraph from an edge
//! list and turn feature overlap into per-item scores.

use partilab::ingest::{jaccard_scores, load_edge_list, sample_subgraph, FeatureTable};
use partilab::io::write_scores_csv;
use partilab::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::manifest::{self, ResolvedCommand};

/// Resolved `ingest` invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestSpec {
    /// Edge list path, one `u v` or `u,v[,w]` pair per line.
    pub edges: String,
    /// JSON file mapping node ids to feature token lists.
    pub features: String,
    /// Number of nodes to sample.
    pub size: usize,
    pub seed: u64,
}

pub fn execute(spec: &IngestSpec, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let graph = load_edge_list(&spec.edges)?;
    let table = FeatureTable::from_json_file(&spec.features)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let nodes = sample_subgraph(&graph, spec.size, &mut rng)?;
    let scores = jaccard_scores(&table, &nodes)?;
    write_scores_csv(out_dir.join("scores.csv"), &scores)?;
    let mut mapping = String::from("item,node_id\n");
    for (i, id) in nodes.iter().enumerate() {
        mapping.push_str(&format!("{},{}\n", i + 1, id));
    }
    fs::write(out_dir.join("nodes.csv"), mapping)?;
    println!("sampled {} of {} nodes", nodes.len(), graph.node_count());
    manifest::write(
        out_dir,
        ResolvedCommand::Ingest(spec.clone()),
        &[&spec.edges, &spec.features],
    )?;
    Ok(())
}
