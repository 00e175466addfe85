//! Comparison of result files: per-attribute-pair accuracy scatter,
//! average k-th-best accuracy over runs, and recall against a planted
//! ground truth.

use crate::synth::GroundTruthEntry;
use crate::{CliError, CliResult};
use fier_core::query::Query;
use std::collections::BTreeMap;
use std::path::Path;

/// One row of a results CSV.
#[derive(Debug, Clone)]
pub struct ResultRecord {
    pub lquery: String,
    pub rquery: String,
    pub e11: usize,
    pub e10: usize,
    pub e01: usize,
    pub e00: usize,
    pub accuracy: f64,
    pub length: usize,
}

pub fn read_results(path: &Path) -> CliResult<Vec<ResultRecord>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::data(e.to_string()))?
        .clone();
    let expected = [
        "lquery", "rquery", "e11", "e10", "e01", "e00", "accuracy", "length",
    ];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(CliError::data(format!(
            "{}: unexpected results header {:?}",
            path.display(),
            headers
        )));
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::data(e.to_string()))?;
        let field = |j: usize| record.get(j).unwrap_or("");
        let parse_usize = |j: usize| -> CliResult<usize> {
            field(j)
                .parse()
                .map_err(|_| CliError::data(format!("{}:{}: bad count", path.display(), i + 2)))
        };
        out.push(ResultRecord {
            lquery: field(0).to_string(),
            rquery: field(1).to_string(),
            e11: parse_usize(2)?,
            e10: parse_usize(3)?,
            e01: parse_usize(4)?,
            e00: parse_usize(5)?,
            accuracy: field(6).parse().map_err(|_| {
                CliError::data(format!("{}:{}: bad accuracy", path.display(), i + 2))
            })?,
            length: parse_usize(7)?,
        })
    }
    Ok(out)
}

/// Attribute-pair key of a record: the sorted attribute names of each
/// query, joined with `+`. Initial pairs reduce to the plain column pair.
pub fn attribute_key(record: &ResultRecord) -> CliResult<(String, String)> {
    let names = |q: &str| -> CliResult<String> {
        let query = Query::parse_syntax(q)
            .map_err(|e| CliError::data(format!("unparseable query `{q}`: {e}")))?;
        let mut names: Vec<String> = query.literals().map(|l| l.attribute.clone()).collect();
        names.sort();
        names.dedup();
        Ok(names.join("+"))
    };
    Ok((names(&record.lquery)?, names(&record.rquery)?))
}

/// Average accuracy of the k-th best result across runs; a run with fewer
/// than `k` results contributes its worst accuracy (or 0 when empty).
pub fn j_at_k(runs: &[Vec<ResultRecord>], k: usize) -> f64 {
    if runs.is_empty() {
        return 0.0;
    }
    let total: f64 = runs
        .iter()
        .map(|records| {
            let mut accs: Vec<f64> = records.iter().map(|r| r.accuracy).collect();
            accs.sort_by(|a, b| b.partial_cmp(a).unwrap());
            match accs.get(k - 1) {
                Some(&v) => v,
                None => accs.last().copied().unwrap_or(0.0),
            }
        })
        .sum();
    total / runs.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRow {
    pub left_key: String,
    pub right_key: String,
    pub acc_a: f64,
    pub acc_b: f64,
}

/// Per-phase wall times lifted from a run's metadata sidecar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTimes {
    pub init_seconds: f64,
    pub extension_seconds: f64,
}

/// Pull the phase timings out of a `meta.txt` sidecar.
pub fn read_phase_times(path: &Path) -> CliResult<PhaseTimes> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let mut init = None;
    let mut ext = None;
    for line in text.lines() {
        if let Some((key, value)) = line.split_once('=') {
            let value = value.trim();
            match key.trim() {
                "time_init_s" => init = value.parse().ok(),
                "time_extension_s" => ext = value.parse().ok(),
                _ => {}
            }
        }
    }
    match (init, ext) {
        (Some(init_seconds), Some(extension_seconds)) => Ok(PhaseTimes {
            init_seconds,
            extension_seconds,
        }),
        _ => Err(CliError::data(format!(
            "{}: missing phase timings",
            path.display()
        ))),
    }
}

#[derive(Debug)]
pub struct ComparisonReport {
    /// Per attribute pair: each side's best accuracy averaged over its
    /// runs, 0 for runs where the pair is absent.
    pub scatter: Vec<ScatterRow>,
    /// (k, side A, side B) for k = 5 and 10.
    pub j_at: Vec<(usize, f64, f64)>,
    pub results_a: usize,
    pub results_b: usize,
    /// Fraction of ground-truth pairs each side recovered.
    pub recall: Option<(f64, f64)>,
    /// Per-phase wall times from the runs' metadata, when provided.
    pub times_a: Option<PhaseTimes>,
    pub times_b: Option<PhaseTimes>,
}

/// Best accuracy per attribute pair within one run.
fn best_by_key(records: &[ResultRecord]) -> CliResult<BTreeMap<(String, String), f64>> {
    let mut best: BTreeMap<(String, String), f64> = BTreeMap::new();
    for record in records {
        let key = attribute_key(record)?;
        let entry = best.entry(key).or_insert(0.0);
        if record.accuracy > *entry {
            *entry = record.accuracy;
        }
    }
    Ok(best)
}

/// A ground-truth pair counts as recovered when some record uses its left
/// attribute on the left and its right attribute on the right.
fn recall_of(runs: &[Vec<ResultRecord>], truth: &[GroundTruthEntry]) -> CliResult<f64> {
    if truth.is_empty() || runs.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for records in runs {
        let mut hit = 0usize;
        let keys: Vec<(Vec<String>, Vec<String>)> = records
            .iter()
            .map(|r| -> CliResult<_> {
                let l = Query::parse_syntax(&r.lquery)
                    .map_err(|e| CliError::data(e.to_string()))?
                    .literals()
                    .map(|l| l.attribute.clone())
                    .collect();
                let rr = Query::parse_syntax(&r.rquery)
                    .map_err(|e| CliError::data(e.to_string()))?
                    .literals()
                    .map(|l| l.attribute.clone())
                    .collect();
                Ok((l, rr))
            })
            .collect::<CliResult<_>>()?;
        for gt in truth {
            if keys
                .iter()
                .any(|(l, r)| l.contains(&gt.left_attr) && r.contains(&gt.right_attr))
            {
                hit += 1;
            }
        }
        total += hit as f64 / truth.len() as f64;
    }
    Ok(total / runs.len() as f64)
}

pub fn compare(
    runs_a: &[Vec<ResultRecord>],
    runs_b: &[Vec<ResultRecord>],
    ground_truth: Option<&[GroundTruthEntry]>,
) -> CliResult<ComparisonReport> {
    // per side: key -> mean over runs of the per-run best (absent = 0)
    let mean_by_key = |runs: &[Vec<ResultRecord>]| -> CliResult<BTreeMap<(String, String), f64>> {
        let per_run: Vec<BTreeMap<(String, String), f64>> = runs
            .iter()
            .map(|r| best_by_key(r))
            .collect::<CliResult<_>>()?;
        let mut keys: BTreeMap<(String, String), f64> = BTreeMap::new();
        for run in &per_run {
            for key in run.keys() {
                keys.entry(key.clone()).or_insert(0.0);
            }
        }
        let n = per_run.len().max(1) as f64;
        for (key, slot) in keys.iter_mut() {
            *slot = per_run
                .iter()
                .map(|run| run.get(key).copied().unwrap_or(0.0))
                .sum::<f64>()
                / n;
        }
        Ok(keys)
    };
    let a_keys = mean_by_key(runs_a)?;
    let b_keys = mean_by_key(runs_b)?;

    let mut all_keys: Vec<(String, String)> = a_keys.keys().cloned().collect();
    all_keys.extend(b_keys.keys().cloned());
    all_keys.sort();
    all_keys.dedup();

    let scatter = all_keys
        .into_iter()
        .map(|key| ScatterRow {
            acc_a: a_keys.get(&key).copied().unwrap_or(0.0),
            acc_b: b_keys.get(&key).copied().unwrap_or(0.0),
            left_key: key.0,
            right_key: key.1,
        })
        .collect();

    let j_at = [5, 10]
        .iter()
        .map(|&k| (k, j_at_k(runs_a, k), j_at_k(runs_b, k)))
        .collect();

    let recall = match ground_truth {
        Some(truth) => Some((recall_of(runs_a, truth)?, recall_of(runs_b, truth)?)),
        None => None,
    };

    Ok(ComparisonReport {
        scatter,
        j_at,
        results_a: runs_a.iter().map(Vec::len).sum(),
        results_b: runs_b.iter().map(Vec::len).sum(),
        recall,
        times_a: None,
        times_b: None,
    })
}

pub fn write_scatter(report: &ComparisonReport, path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    w.write_record(["left_attrs", "right_attrs", "acc_a", "acc_b"])
        .map_err(|e| CliError::data(e.to_string()))?;
    for row in &report.scatter {
        w.write_record([
            row.left_key.as_str(),
            row.right_key.as_str(),
            &format!("{}", row.acc_a),
            &format!("{}", row.acc_b),
        ])
        .map_err(|e| CliError::data(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::data(e.to_string()))?;
    Ok(())
}

impl ComparisonReport {
    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "attribute pairs: {} (A results: {}, B results: {})\n",
            self.scatter.len(),
            self.results_a,
            self.results_b
        ));
        for (k, a, b) in &self.j_at {
            out.push_str(&format!("J@{k}: A = {a:.4}, B = {b:.4}\n"));
        }
        if let Some((ra, rb)) = self.recall {
            out.push_str(&format!("ground-truth recall: A = {ra:.4}, B = {rb:.4}\n"));
        }
        for (label, times) in [("A", &self.times_a), ("B", &self.times_b)] {
            if let Some(t) = times {
                out.push_str(&format!(
                    "wall time {label}: init {:.3}s, extension {:.3}s\n",
                    t.init_seconds, t.extension_seconds
                ));
            }
        }
        let diagonal = self
            .scatter
            .iter()
            .filter(|r| (r.acc_a - r.acc_b).abs() < 1e-9)
            .count();
        out.push_str(&format!("pairs on the diagonal: {diagonal}\n"));
        out
    }
}
