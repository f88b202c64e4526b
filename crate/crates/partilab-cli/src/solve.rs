//! The `solve` subcommand: partition one instance under a chosen
//! objective with an explicit solver or automatic dispatch.

use partilab::core::{
    evaluate_objective, score_matrix, CompatibilityMatrix, ObjectiveKind, Partition, ScoreVector,
    TOLERANCE,
};
use partilab::general_solvers::{
    brute_force_optimal_capped, is_transitive, solve_k2_avg, solve_k2_min, transitive_mom,
    TransitiveMomSolution,
};
use partilab::io::{format_f64, read_matrix_csv, read_scores_csv, write_partition_file};
use partilab::score_solvers::{
    evaluate_scores, greedy_moa, heterophilous_partition, homophilous_partition,
};
use partilab::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::manifest::{self, ResolvedCommand};

/// Where the instance comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputSpec {
    /// Dense symmetric compatibility matrix CSV.
    Matrix { path: String },
    /// Per-item score CSV; compatibilities are score products.
    Scores { path: String },
}

impl InputSpec {
    /// Path of the underlying file.
    pub fn path(&self) -> &str {
        match self {
            InputSpec::Matrix { path } | InputSpec::Scores { path } => path,
        }
    }

    /// Loads the instance, returning the scores too when it is score-based.
    pub fn load(&self) -> Result<(CompatibilityMatrix, Option<ScoreVector>)> {
        match self {
            InputSpec::Matrix { path } => Ok((read_matrix_csv(path)?, None)),
            InputSpec::Scores { path } => {
                let s = read_scores_csv(path)?;
                Ok((score_matrix(&s), Some(s)))
            }
        }
    }
}

/// Solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum Method {
    /// Pick the exact polynomial solver when one applies, else greedy for
    /// score-based MoA, else brute force under the cap.
    Auto,
    /// Contiguous blocks of the score-sorted order.
    Homophilous,
    /// Top-ranked items mixed with one bottom-ranked item per group.
    Heterophilous,
    /// Descending-score assignment to the lightest open group.
    Greedy,
    /// Exact pair solvers for k = 2 via weighted matching.
    K2,
    /// Exact bottleneck solver for transitive compatibilities.
    Transitive,
    /// Exhaustive enumeration under the cap.
    Brute,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Homophilous => "homophilous",
            Method::Heterophilous => "heterophilous",
            Method::Greedy => "greedy",
            Method::K2 => "k2",
            Method::Transitive => "transitive",
            Method::Brute => "brute",
        }
    }
}

/// Resolved `solve` invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveSpec {
    pub input: InputSpec,
    pub k: usize,
    pub objective: ObjectiveKind,
    pub method: Method,
    pub cap: u64,
}

fn require_scores<'a>(scores: &'a Option<ScoreVector>, method: Method) -> Result<&'a ScoreVector> {
    scores.as_ref().ok_or_else(|| {
        Error::InvalidConfig(format!(
            "method {} needs score input, got a matrix",
            method.name()
        ))
    })
}

fn require_pair_groups(k: usize, method: Method) -> Result<()> {
    if k != 2 {
        return Err(Error::InvalidConfig(format!(
            "method {} needs k = 2, got k = {}",
            method.name(),
            k
        )));
    }
    Ok(())
}

fn has_zero_diagonal(w: &CompatibilityMatrix) -> bool {
    (0..w.n()).all(|i| w.get(i, i).abs() <= TOLERANCE)
}

/// Picks the solver `auto` stands for on this instance.
fn resolve_auto(
    spec: &SolveSpec,
    w: &CompatibilityMatrix,
    scores: &Option<ScoreVector>,
) -> Method {
    if scores.is_some() {
        return match spec.objective {
            ObjectiveKind::AoA | ObjectiveKind::AoM => Method::Homophilous,
            ObjectiveKind::MoM => Method::Heterophilous,
            ObjectiveKind::MoA => Method::Greedy,
        };
    }
    if spec.k == 2 {
        match spec.objective {
            ObjectiveKind::AoA | ObjectiveKind::MoM | ObjectiveKind::MoA => return Method::K2,
            ObjectiveKind::AoM if has_zero_diagonal(w) => return Method::K2,
            ObjectiveKind::AoM => {}
        }
    }
    if spec.objective == ObjectiveKind::MoM && spec.k >= 2 && is_transitive(w) {
        if let Ok(solution) = transitive_mom(w, spec.k) {
            if !solution.has_dummy_groups {
                return Method::Transitive;
            }
        }
    }
    Method::Brute
}

/// Writes groups that may be smaller than `k` after padding removal,
/// in the usual partition file layout.
fn write_real_groups(path: &Path, solution: &TransitiveMomSolution) -> Result<()> {
    let mut groups = solution.real_groups();
    groups.sort_by_key(|g| g[0]);
    let mut text = String::new();
    for group in &groups {
        let line: Vec<String> = group.iter().map(|&i| (i + 1).to_string()).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn execute(spec: &SolveSpec, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let (w, scores) = spec.input.load()?;
    let n = w.n();
    if spec.k == 0 || n % spec.k != 0 {
        return Err(Error::InvalidInput(format!(
            "group size {} must divide the item count {}",
            spec.k, n
        )));
    }
    let method = match spec.method {
        Method::Auto => resolve_auto(spec, &w, &scores),
        other => other,
    };
    let partition_path = out_dir.join("partition.txt");
    let value = match method {
        Method::Auto => unreachable!("auto resolves to a concrete method"),
        Method::Homophilous => {
            let s = require_scores(&scores, method)?;
            let p = homophilous_partition(s, spec.k)?;
            write_partition_file(&partition_path, &p)?;
            evaluate_scores(s, &p, spec.objective)?
        }
        Method::Heterophilous => {
            let s = require_scores(&scores, method)?;
            let p = heterophilous_partition(s, spec.k)?;
            write_partition_file(&partition_path, &p)?;
            evaluate_scores(s, &p, spec.objective)?
        }
        Method::Greedy => {
            let s = require_scores(&scores, method)?;
            let p = greedy_moa(s, spec.k)?;
            write_partition_file(&partition_path, &p)?;
            evaluate_scores(s, &p, spec.objective)?
        }
        Method::K2 => {
            require_pair_groups(spec.k, method)?;
            let (p, value) = match spec.objective {
                ObjectiveKind::AoA => solve_k2_avg(&w)?,
                ObjectiveKind::AoM => {
                    let (p, _) = solve_k2_avg(&w)?;
                    let value = evaluate_objective(&p, &w, ObjectiveKind::AoM)?;
                    (p, value)
                }
                ObjectiveKind::MoM | ObjectiveKind::MoA => solve_k2_min(&w, spec.objective)?,
            };
            write_partition_file(&partition_path, &p)?;
            value
        }
        Method::Transitive => {
            if spec.objective != ObjectiveKind::MoM {
                return Err(Error::InvalidConfig(format!(
                    "method transitive solves mom only, got {}",
                    spec.objective
                )));
            }
            let solution = transitive_mom(&w, spec.k)?;
            if solution.has_dummy_groups {
                write_real_groups(&partition_path, &solution)?;
            } else {
                let groups = solution.real_groups();
                let p = Partition::new(groups, n, spec.k)?;
                write_partition_file(&partition_path, &p)?;
            }
            solution.value
        }
        Method::Brute => {
            let (p, value) =
                brute_force_optimal_capped(&w, spec.k, spec.objective, u128::from(spec.cap))?;
            write_partition_file(&partition_path, &p)?;
            value
        }
    };
    println!("method {} value {}", method.name(), format_f64(value));
    manifest::write(
        out_dir,
        ResolvedCommand::Solve(spec.clone()),
        &[spec.input.path()],
    )?;
    Ok(())
}
