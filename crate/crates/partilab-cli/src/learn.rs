//! The `learn` subcommand: seeded repetitions of the ordering learner,
//! written out as a per-run trace CSV and a mean error curve.

use partilab::io::{format_f64, read_scores_csv};
use partilab::learner::{learn_order, LearnConfig, LearnResult, RoundsBudget};
use partilab::simenv::{FeedbackEnv, NoiseModel};
use partilab::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::manifest::{self, ResolvedCommand};

/// Resolved `learn` invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LearnSpec {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub delta: f64,
    /// Explicit per-edge budget; absent means the auto formula.
    pub rounds_per_edge: Option<usize>,
    /// Caller's score-gap guess for the auto budget.
    pub delta_guess: Option<f64>,
    pub noise: NoiseModel,
    /// Number of independent repetitions.
    pub runs: usize,
    pub seed: u64,
    /// Score CSV path; absent means fresh uniform integer scores per run.
    pub scores: Option<String>,
}

/// Independent seed triple for one repetition, all derived from the run
/// seed so repetitions stay decoupled however many there are.
struct RunSeeds {
    scores: u64,
    env: u64,
    graph: u64,
}

fn derive_seeds(seed: u64, runs: usize) -> Vec<RunSeeds> {
    let mut root = ChaCha8Rng::seed_from_u64(seed);
    (0..runs)
        .map(|_| RunSeeds {
            scores: root.random(),
            env: root.random(),
            graph: root.random(),
        })
        .collect()
}

fn synthetic_scores(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(1..=10) as f64).collect()
}

fn run_once(spec: &LearnSpec, seeds: &RunSeeds, file_scores: &Option<Vec<f64>>) -> Result<LearnResult> {
    let vals = match file_scores {
        Some(vals) => vals.clone(),
        None => synthetic_scores(spec.n, seeds.scores),
    };
    let s = partilab::core::ScoreVector::new(vals)?;
    let mut env = FeedbackEnv::new(s, spec.k, spec.noise, seeds.env)?;
    let mut cfg = LearnConfig::new(spec.n, spec.k, spec.delta, seeds.graph);
    cfg.m = spec.m;
    cfg.rounds_per_edge = match spec.rounds_per_edge {
        Some(r) => RoundsBudget::Fixed(r),
        None => RoundsBudget::Auto,
    };
    cfg.delta_guess = spec.delta_guess;
    cfg.noise_bound = spec.noise.bound();
    cfg.require_connected = true;
    learn_order(&cfg, &mut env)
}

fn write_trace(path: &Path, results: &[LearnResult]) -> Result<()> {
    let mut text = String::from("run_id,round,cumulative_queries,normalized_error,ordering_correct\n");
    for (run_id, result) in results.iter().enumerate() {
        for row in &result.trace {
            let error = row.normalized_error.map(format_f64).unwrap_or_default();
            let correct = match row.ordering_correct {
                Some(true) => "1",
                Some(false) => "0",
                None => "",
            };
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                run_id, row.round, row.cumulative_queries, error, correct
            ));
        }
    }
    fs::write(path, text)?;
    Ok(())
}

/// Per-round mean and population standard deviation of the normalized
/// error across runs. Runs whose trace ends early hold their final value.
fn write_mean_curve(path: &Path, results: &[LearnResult]) -> Result<()> {
    let max_rounds = results.iter().map(|r| r.trace.len()).max().unwrap_or(0);
    let mut text = String::from("round,mean_normalized_error,std_normalized_error\n");
    for t in 0..max_rounds {
        let samples: Vec<f64> = results
            .iter()
            .map(|r| {
                let row = &r.trace[t.min(r.trace.len() - 1)];
                row.normalized_error
                    .expect("trace carries error columns when truth is visible")
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / samples.len() as f64;
        text.push_str(&format!(
            "{},{},{}\n",
            t + 1,
            format_f64(mean),
            format_f64(var.sqrt())
        ));
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn execute(spec: &LearnSpec, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    if spec.runs == 0 {
        return Err(Error::InvalidConfig("need at least one run".into()));
    }
    let file_scores = match &spec.scores {
        Some(path) => {
            let s = read_scores_csv(path)?;
            if s.len() != spec.n {
                return Err(Error::InvalidConfig(format!(
                    "score file holds {} items but the run is configured for {}",
                    s.len(),
                    spec.n
                )));
            }
            Some(s.as_slice().to_vec())
        }
        None => None,
    };
    let seeds = derive_seeds(spec.seed, spec.runs);
    let results: Vec<LearnResult> = seeds
        .par_iter()
        .map(|run_seeds| run_once(spec, run_seeds, &file_scores))
        .collect::<Result<Vec<_>>>()?;
    write_trace(&out_dir.join("trace.csv"), &results)?;
    write_mean_curve(&out_dir.join("mean_curve.csv"), &results)?;
    let finals: Vec<&partilab::learner::TraceRow> = results
        .iter()
        .map(|r| r.trace.last().expect("every run has at least one round"))
        .collect();
    let mean_final = finals
        .iter()
        .map(|row| row.normalized_error.unwrap_or(f64::NAN))
        .sum::<f64>()
        / finals.len() as f64;
    let correct = finals
        .iter()
        .filter(|row| row.ordering_correct == Some(true))
        .count();
    println!(
        "runs {} mean_final_error {} ordering_correct {}/{}",
        spec.runs,
        format_f64(mean_final),
        correct,
        spec.runs
    );
    let inputs: Vec<&str> = spec.scores.as_deref().into_iter().collect();
    manifest::write(out_dir, ResolvedCommand::Learn(spec.clone()), &inputs)?;
    Ok(())
}
