//! The `oracle` subcommand: exact brute-force optimum for audit runs,
//! reporting how many partitions were enumerated.

use partilab::general_solvers::{brute_force_optimal_capped, partition_count};
use partilab::io::{format_f64, write_partition_file};
use partilab::Result;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::manifest::{self, ResolvedCommand};
use crate::solve::InputSpec;
use partilab::core::ObjectiveKind;

/// Resolved `oracle` invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleSpec {
    pub input: InputSpec,
    pub k: usize,
    pub objective: ObjectiveKind,
    pub cap: u64,
}

pub fn execute(spec: &OracleSpec, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let (w, _) = spec.input.load()?;
    let count = partition_count(w.n(), spec.k)?;
    let (p, value) = brute_force_optimal_capped(&w, spec.k, spec.objective, u128::from(spec.cap))?;
    write_partition_file(out_dir.join("partition.txt"), &p)?;
    println!("partitions {} value {}", count, format_f64(value));
    manifest::write(
        out_dir,
        ResolvedCommand::Oracle(spec.clone()),
        &[spec.input.path()],
    )?;
    Ok(())
}
