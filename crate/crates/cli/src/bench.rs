//! Scaling benchmarks: initial-pair phase wall time at growing row
//! counts, for the LSH miner and the pre-bucketed exhaustive baseline.
//!
//! Only the pair phase is timed, since the comparison of interest is how
//! the two ways of finding initial pairs scale; runs are repeated with
//! the median reported, plus the growth ratio between consecutive sizes.

use crate::config::MiningConfig;
use crate::synth::{generate, SyntheticSpec};
use crate::CliResult;
use fier_core::pairs::{exhaustive_pairs, fier_init, ExhaustiveMode};
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAlgorithm {
    FierInit,
    ReremiBkt,
}

impl BenchAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            BenchAlgorithm::FierInit => "fier-init",
            BenchAlgorithm::ReremiBkt => "reremi-bkt",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub algorithm: &'static str,
    pub rows: usize,
    pub reps: usize,
    pub median_seconds: f64,
    /// Wall-time ratio against the previous (smaller) row count.
    pub growth_ratio: Option<f64>,
    pub pairs_found: usize,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

/// Time the pair phase of one algorithm on one dataset.
pub fn time_pair_phase(
    algorithm: BenchAlgorithm,
    tables: &fier_core::Tables,
    config: &MiningConfig,
    reps: usize,
) -> CliResult<(f64, usize)> {
    let constraints = config.constraints(tables.rows())?;
    let mut times = Vec::with_capacity(reps);
    let mut pairs = 0usize;
    for _ in 0..reps.max(1) {
        let t0 = Instant::now();
        pairs = match algorithm {
            BenchAlgorithm::FierInit => fier_init(tables, &config.pair_params(), &constraints)?
                .redescriptions
                .len(),
            BenchAlgorithm::ReremiBkt => exhaustive_pairs(
                tables,
                &constraints,
                ExhaustiveMode::PreBucketed,
                config.nbuk,
                config.max_cat_combo,
                config.threads,
            )?
            .len(),
        };
        times.push(t0.elapsed().as_secs_f64());
    }
    Ok((median(times), pairs))
}

/// Run the benchmark over a list of row counts. Datasets are generated in
/// memory from the spec template with the row count overridden.
pub fn bench_scaling(
    template: &SyntheticSpec,
    config: &MiningConfig,
    row_counts: &[usize],
    reps: usize,
    algorithms: &[BenchAlgorithm],
) -> CliResult<Vec<BenchRow>> {
    let mut out = Vec::new();
    for &algorithm in algorithms {
        let mut prev: Option<f64> = None;
        for &rows in row_counts {
            let spec = SyntheticSpec {
                rows,
                ..template.clone()
            };
            let synthetic = generate(&spec)?;
            let (median_seconds, pairs_found) =
                time_pair_phase(algorithm, &synthetic.tables, config, reps)?;
            let growth_ratio = prev.map(|p| median_seconds / p);
            prev = Some(median_seconds);
            out.push(BenchRow {
                algorithm: algorithm.name(),
                rows,
                reps,
                median_seconds,
                growth_ratio,
                pairs_found,
            });
        }
    }
    Ok(out)
}

pub fn write_timing_csv(rows: &[BenchRow], path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| crate::CliError::data(format!("cannot write {}: {e}", path.display())))?;
    w.write_record([
        "algorithm",
        "rows",
        "reps",
        "median_seconds",
        "growth_ratio",
        "pairs",
    ])
    .map_err(|e| crate::CliError::data(e.to_string()))?;
    for row in rows {
        w.write_record([
            row.algorithm,
            &row.rows.to_string(),
            &row.reps.to_string(),
            &format!("{:.6}", row.median_seconds),
            &row.growth_ratio
                .map(|r| format!("{r:.3}"))
                .unwrap_or_default(),
            &row.pairs_found.to_string(),
        ])
        .map_err(|e| crate::CliError::data(e.to_string()))?;
    }
    w.flush()
        .map_err(|e| crate::CliError::data(e.to_string()))?;
    Ok(())
}
