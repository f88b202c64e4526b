//! File formats: dense matrix CSV, score CSV, and partition files. Values
//! are written in the shortest decimal form that parses back to the exact
//! same double, so save/load round-trips are bit-exact.

use crate::core::{CompatibilityMatrix, Partition, ScoreVector};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Renders a double so that parsing the text recovers the exact bits.
pub fn format_f64(x: f64) -> String {
    format!("{}", x)
}

fn parse_field(raw: &str, line: usize, what: &str) -> Result<f64> {
    raw.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {} {:?}", what, raw.trim()),
    })
}

fn parse_index(raw: &str, line: usize, what: &str) -> Result<usize> {
    raw.trim().parse::<usize>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {} {:?}", what, raw.trim()),
    })
}

/// Writes a matrix as `n` lines of `n` comma-separated values, no header.
pub fn write_matrix_csv(path: impl AsRef<Path>, w: &CompatibilityMatrix) -> Result<()> {
    let mut out = String::new();
    for i in 0..w.n() {
        let row: Vec<String> = w.row(i).iter().map(|&x| format_f64(x)).collect();
        writeln!(out, "{}", row.join(",")).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a dense matrix CSV; symmetry and nonnegativity are validated.
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<CompatibilityMatrix> {
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| parse_field(field, idx + 1, "matrix entry"))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!(
                        "row has {} entries, expected {}",
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    CompatibilityMatrix::from_rows(rows)
}

/// Writes scores as a CSV with header `item,score`, items 1-indexed.
pub fn write_scores_csv(path: impl AsRef<Path>, s: &ScoreVector) -> Result<()> {
    let mut out = String::from("item,score\n");
    for i in 0..s.len() {
        writeln!(out, "{},{}", i + 1, format_f64(s.get(i))).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a score CSV; rows may arrive in any order but must cover the
/// items 1..n exactly once.
pub fn read_scores_csv(path: impl AsRef<Path>) -> Result<ScoreVector> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim().eq_ignore_ascii_case("item,score") => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "expected header \"item,score\"".into(),
            })
        }
    }
    let mut entries: Vec<(usize, f64)> = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let item = parse_index(fields.next().unwrap_or(""), idx + 1, "item index")?;
        let score = parse_field(fields.next().unwrap_or(""), idx + 1, "score")?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected exactly two fields".into(),
            });
        }
        if item == 0 {
            return Err(Error::Parse {
                line: idx + 1,
                message: "items are 1-indexed".into(),
            });
        }
        entries.push((item, score));
    }
    let n = entries.len();
    let mut scores = vec![None; n];
    for (item, score) in entries {
        if item > n || scores[item - 1].replace(score).is_some() {
            return Err(Error::InvalidInput(format!(
                "items must cover 1..{} exactly once; item {} breaks that",
                n, item
            )));
        }
    }
    ScoreVector::new(scores.into_iter().map(Option::unwrap).collect())
}

/// Writes a partition as one group per line, comma-separated 1-indexed
/// items, groups ordered by first element.
pub fn write_partition_file(path: impl AsRef<Path>, p: &Partition) -> Result<()> {
    let mut out = String::new();
    for group in p.groups() {
        let row: Vec<String> = group.iter().map(|&i| (i + 1).to_string()).collect();
        writeln!(out, "{}", row.join(",")).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a partition file; the item count and group size are inferred and
/// the usual partition validation applies.
pub fn read_partition_file(path: impl AsRef<Path>) -> Result<Partition> {
    let text = std::fs::read_to_string(path)?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let group = line
            .split(',')
            .map(|field| {
                let item = parse_index(field, idx + 1, "item index")?;
                if item == 0 {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: "items are 1-indexed".into(),
                    });
                }
                Ok(item - 1)
            })
            .collect::<Result<Vec<usize>>>()?;
        groups.push(group);
    }
    if groups.is_empty() {
        return Err(Error::InvalidInput("partition file has no groups".into()));
    }
    let k = groups[0].len();
    let n: usize = groups.iter().map(Vec::len).sum();
    Partition::new(groups, n, k)
}
