//! End-to-end mining runs: load data, dispatch the selected algorithm,
//! time the two phases, and emit the result CSV, the extension trace and
//! the metadata sidecar.

use crate::config::{Algorithm, MiningConfig};
use crate::{CliError, CliResult};
use fier_core::data::Schema;
use fier_core::extend::{
    build_extension_signatures, exhaustive_extend, fier_ext, ExtensionOutcome,
};
use fier_core::pairs::{
    best_per_attribute_pair, exhaustive_pairs, fier_init, ExhaustiveMode, MinedRedescription,
};
use fier_core::{Constraints, Tables};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimings {
    pub init_seconds: f64,
    pub extension_seconds: f64,
}

impl PhaseTimings {
    pub fn total(&self) -> f64 {
        self.init_seconds + self.extension_seconds
    }
}

/// In-memory outcome of a run, before any files are written.
pub struct RunOutcome {
    /// Records destined for the results CSV, canonically ordered.
    pub records: Vec<MinedRedescription>,
    /// Every accepted extension step, for the trace file.
    pub trace: Vec<MinedRedescription>,
    pub initial_pairs: usize,
    pub candidate_pairs: usize,
    pub extension_steps: usize,
    pub timings: PhaseTimings,
}

/// Run the selected algorithm on loaded tables.
///
/// fier-init reports the best pair per attribute pair; the full pipelines
/// report the extension output (every accepted step plus unextendable
/// initial pairs). The LSH pipeline extends every verified pair, the
/// exhaustive ones their per-attribute-pair bests.
pub fn mine_tables(tables: &Tables, config: &MiningConfig) -> CliResult<RunOutcome> {
    let constraints = config.constraints(tables.rows())?;
    match config.algorithm {
        Algorithm::FierInit => {
            let t0 = Instant::now();
            let found = fier_init(tables, &config.pair_params(), &constraints)?;
            let init_seconds = t0.elapsed().as_secs_f64();
            Ok(RunOutcome {
                records: best_per_attribute_pair(&found.redescriptions),
                trace: Vec::new(),
                initial_pairs: found.redescriptions.len(),
                candidate_pairs: found.candidate_pairs,
                extension_steps: 0,
                timings: PhaseTimings {
                    init_seconds,
                    extension_seconds: 0.0,
                },
            })
        }
        Algorithm::FierFull => {
            let t0 = Instant::now();
            let found = fier_init(tables, &config.pair_params(), &constraints)?;
            let init_seconds = t0.elapsed().as_secs_f64();
            let initial_pairs = found.redescriptions.len();
            let candidate_pairs = found.candidate_pairs;

            let t1 = Instant::now();
            let params = config.extension_params();
            let store = build_extension_signatures(tables, &params)?;
            let outcome = fier_ext(found.redescriptions, &store, tables, &constraints, &params)?;
            let extension_seconds = t1.elapsed().as_secs_f64();
            Ok(finish_extended(
                outcome,
                initial_pairs,
                candidate_pairs,
                PhaseTimings {
                    init_seconds,
                    extension_seconds,
                },
            ))
        }
        Algorithm::Reremi | Algorithm::ReremiBkt => {
            let mode = match config.algorithm {
                Algorithm::Reremi => ExhaustiveMode::OnTheFly,
                _ => ExhaustiveMode::PreBucketed,
            };
            let t0 = Instant::now();
            let initial = exhaustive_pairs(
                tables,
                &constraints,
                mode,
                config.nbuk,
                config.max_cat_combo,
                config.threads,
            )?;
            let init_seconds = t0.elapsed().as_secs_f64();
            let initial_pairs = initial.len();

            let t1 = Instant::now();
            let outcome =
                exhaustive_extend(initial, tables, &constraints, config.beam, config.threads)?;
            let extension_seconds = t1.elapsed().as_secs_f64();
            Ok(finish_extended(
                outcome,
                initial_pairs,
                initial_pairs,
                PhaseTimings {
                    init_seconds,
                    extension_seconds,
                },
            ))
        }
    }
}

fn finish_extended(
    outcome: ExtensionOutcome,
    initial_pairs: usize,
    candidate_pairs: usize,
    timings: PhaseTimings,
) -> RunOutcome {
    let trace: Vec<MinedRedescription> = outcome
        .results
        .iter()
        .filter(|r| r.parent.is_some())
        .cloned()
        .collect();
    RunOutcome {
        extension_steps: outcome.steps,
        records: outcome.results,
        trace,
        initial_pairs,
        candidate_pairs,
        timings,
    }
}

/// Paths of the files a run writes.
pub struct RunArtifacts {
    pub results: PathBuf,
    pub trace: Option<PathBuf>,
    pub meta: PathBuf,
}

/// Load the configured data, run, and write all artifacts into `out_dir`.
pub fn run(config: &MiningConfig) -> CliResult<(RunOutcome, RunArtifacts)> {
    config.validate()?;
    let schema = Schema::load(&config.schema)?;
    let tables = Tables::load(&config.left, &config.right, &schema)?;
    let outcome = mine_tables(&tables, config)?;

    std::fs::create_dir_all(&config.out_dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", config.out_dir.display())))?;
    let results = config.out_dir.join("results.csv");
    write_results(&outcome.records, &results)?;

    let trace = if config.algorithm == Algorithm::FierInit {
        None
    } else {
        let path = config.out_dir.join("trace.csv");
        write_trace(&outcome.trace, &path)?;
        Some(path)
    };

    let meta = config.out_dir.join("meta.txt");
    write_meta(config, &tables, &outcome, &meta)?;
    Ok((
        outcome,
        RunArtifacts {
            results,
            trace,
            meta,
        },
    ))
}

/// Results CSV: one record per redescription, stable order, stable float
/// rendering; byte-identical across reruns of the same config and seed.
pub fn write_results(records: &[MinedRedescription], path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    w.write_record([
        "lquery", "rquery", "e11", "e10", "e01", "e00", "accuracy", "length",
    ])
    .map_err(|e| CliError::data(e.to_string()))?;
    for r in records {
        let p = &r.partition;
        w.write_record([
            r.lquery.format().as_str(),
            r.rquery.format().as_str(),
            &p.e11.to_string(),
            &p.e10.to_string(),
            &p.e01.to_string(),
            &p.e00.to_string(),
            &format!("{}", r.accuracy()),
            &r.literal_count().to_string(),
        ])
        .map_err(|e| CliError::data(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::data(e.to_string()))?;
    Ok(())
}

/// Extension trace: accepted steps with parent links back to initial
/// pairs.
fn write_trace(trace: &[MinedRedescription], path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    w.write_record(["id", "parent", "lquery", "rquery", "accuracy", "length"])
        .map_err(|e| CliError::data(e.to_string()))?;
    let mut rows: Vec<&MinedRedescription> = trace.iter().collect();
    rows.sort_by_key(|r| r.id);
    for r in rows {
        w.write_record([
            r.id.to_string().as_str(),
            &r.parent.map(|p| p.to_string()).unwrap_or_default(),
            &r.lquery.format(),
            &r.rquery.format(),
            &format!("{}", r.accuracy()),
            &r.literal_count().to_string(),
        ])
        .map_err(|e| CliError::data(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::data(e.to_string()))?;
    Ok(())
}

fn write_meta(
    config: &MiningConfig,
    tables: &Tables,
    outcome: &RunOutcome,
    path: &Path,
) -> CliResult<()> {
    let text = format!(
        "{}rows = {}\nleft_attributes = {}\nright_attributes = {}\n\
         initial_pairs = {}\ncandidate_pairs = {}\nextension_steps = {}\nresults = {}\n\
         time_init_s = {:.6}\ntime_extension_s = {:.6}\ntime_total_s = {:.6}\n",
        config.echo(),
        tables.rows(),
        tables.left.columns.len(),
        tables.right.columns.len(),
        outcome.initial_pairs,
        outcome.candidate_pairs,
        outcome.extension_steps,
        outcome.records.len(),
        outcome.timings.init_seconds,
        outcome.timings.extension_seconds,
        outcome.timings.total(),
    );
    std::fs::write(path, text)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

/// Resolved constraints for a dataset under this config; exposed for the
/// benchmark paths that bypass `run`.
pub fn constraints_for(config: &MiningConfig, rows: usize) -> CliResult<Constraints> {
    config.constraints(rows)
}
