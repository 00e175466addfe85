//! Command-line front end for the redescription miner.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on data errors.

use clap::{Args, Parser, Subcommand};
use fier_cli::bench::{bench_scaling, write_timing_csv, BenchAlgorithm};
use fier_cli::compare::{compare, read_results, write_scatter};
use fier_cli::config::MiningConfig;
use fier_cli::synth::{generate, read_ground_truth, write, SyntheticSpec};
use fier_cli::{CliError, CliResult};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fier",
    about = "Redescription mining over two-sided tabular data, with LSH-accelerated \
             initial pairs and extension plus exhaustive baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mining configuration end to end.
    Mine(MineArgs),
    /// Generate a synthetic dataset with planted pairs and ground truth.
    Synth(SynthArgs),
    /// Compare two sets of result files, optionally against ground truth.
    Compare(CompareArgs),
    /// Time the initial-pair phase across growing row counts.
    BenchScaling(BenchArgs),
}

/// Flags mirror config keys one-to-one and override the file.
#[derive(Args)]
struct MineArgs {
    /// Key-value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    left: Option<PathBuf>,
    #[arg(long)]
    right: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    /// fier-full, fier-init, reremi or reremi-bkt.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    b_jacc: Option<usize>,
    #[arg(long)]
    r_jacc: Option<usize>,
    #[arg(long)]
    nbuk: Option<usize>,
    #[arg(long)]
    minsupp: Option<f64>,
    #[arg(long)]
    minout: Option<f64>,
    #[arg(long)]
    minout_mult: Option<f64>,
    #[arg(long)]
    max_cat_combo: Option<usize>,
    #[arg(long)]
    b_ham: Option<usize>,
    #[arg(long)]
    r_ham: Option<usize>,
    /// Comma-separated bucket counts, e.g. 8,16,32,64.
    #[arg(long)]
    bucket_schedule: Option<String>,
    #[arg(long)]
    max_length: Option<usize>,
    #[arg(long)]
    beam: Option<usize>,
    #[arg(long)]
    min_accuracy: Option<f64>,
}

#[derive(Args)]
struct SynthArgs {
    /// Synthetic dataset spec file; omit for the built-in reference spec.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output directory for left.csv, right.csv, schema.txt and
    /// ground_truth.csv.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CompareArgs {
    /// Result CSVs for side A (repeat or comma-separate for several runs).
    #[arg(long, required = true, value_delimiter = ',')]
    a: Vec<PathBuf>,
    /// Result CSVs for side B.
    #[arg(long, required = true, value_delimiter = ',')]
    b: Vec<PathBuf>,
    #[arg(long)]
    ground_truth: Option<PathBuf>,
    /// Metadata sidecars to lift phase wall times from.
    #[arg(long)]
    meta_a: Option<PathBuf>,
    #[arg(long)]
    meta_b: Option<PathBuf>,
    /// Where to write the per-attribute-pair scatter CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Synthetic spec template; omit for the built-in scaling shape
    /// (50 numeric attributes per side).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Row counts to benchmark.
    #[arg(long, required = true, value_delimiter = ',')]
    rows: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Timing CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Restrict to one algorithm (fier-init or reremi-bkt); default both.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    b_jacc: Option<usize>,
    #[arg(long)]
    r_jacc: Option<usize>,
    #[arg(long)]
    nbuk: Option<usize>,
    #[arg(long)]
    minsupp: Option<f64>,
    #[arg(long)]
    minout: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fier: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Mine(args) => mine(args),
        Command::Synth(args) => synth(args),
        Command::Compare(args) => run_compare(args),
        Command::BenchScaling(args) => bench(args),
    }
}

fn mine(args: MineArgs) -> CliResult<()> {
    let mut config = match &args.config {
        Some(path) => MiningConfig::load(path)?,
        None => MiningConfig::default(),
    };
    macro_rules! override_key {
        ($field:expr, $key:literal) => {
            if let Some(v) = &$field {
                config.set($key, &v.to_string())?;
            }
        };
    }
    if let Some(v) = &args.left {
        config.left = v.clone();
    }
    if let Some(v) = &args.right {
        config.right = v.clone();
    }
    if let Some(v) = &args.schema {
        config.schema = v.clone();
    }
    if let Some(v) = &args.out_dir {
        config.out_dir = v.clone();
    }
    override_key!(args.algorithm, "algorithm");
    override_key!(args.seed, "seed");
    override_key!(args.threads, "threads");
    override_key!(args.b_jacc, "b_jacc");
    override_key!(args.r_jacc, "r_jacc");
    override_key!(args.nbuk, "nbuk");
    override_key!(args.minsupp, "minsupp");
    override_key!(args.minout, "minout");
    override_key!(args.minout_mult, "minout_mult");
    override_key!(args.max_cat_combo, "max_cat_combo");
    override_key!(args.b_ham, "b_ham");
    override_key!(args.r_ham, "r_ham");
    override_key!(args.bucket_schedule, "bucket_schedule");
    override_key!(args.max_length, "max_length");
    override_key!(args.beam, "beam");
    override_key!(args.min_accuracy, "min_accuracy");

    let (outcome, artifacts) = fier_cli::runner::run(&config)?;
    println!(
        "{}: {} results ({} initial pairs, {} extension steps) in {:.2}s init + {:.2}s extension",
        config.algorithm,
        outcome.records.len(),
        outcome.initial_pairs,
        outcome.extension_steps,
        outcome.timings.init_seconds,
        outcome.timings.extension_seconds,
    );
    println!("results: {}", artifacts.results.display());
    if let Some(trace) = &artifacts.trace {
        println!("trace: {}", trace.display());
    }
    println!("meta: {}", artifacts.meta.display());
    Ok(())
}

fn synth(args: SynthArgs) -> CliResult<()> {
    let mut spec = match &args.spec {
        Some(path) => SyntheticSpec::load(path)?,
        None => SyntheticSpec::reference(),
    };
    if let Some(rows) = args.rows {
        spec.rows = rows;
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let synthetic = generate(&spec)?;
    write(&synthetic, &args.out)?;
    println!(
        "wrote {} rows, {}+{} attributes, {} planted pairs to {}",
        spec.rows,
        synthetic.tables.left.columns.len(),
        synthetic.tables.right.columns.len(),
        synthetic.ground_truth.len(),
        args.out.display()
    );
    Ok(())
}

fn run_compare(args: CompareArgs) -> CliResult<()> {
    let read_all = |paths: &[PathBuf]| -> CliResult<Vec<_>> {
        paths.iter().map(|p| read_results(p)).collect()
    };
    let runs_a = read_all(&args.a)?;
    let runs_b = read_all(&args.b)?;
    let truth = match &args.ground_truth {
        Some(path) => Some(read_ground_truth(path)?),
        None => None,
    };
    let mut report = compare(&runs_a, &runs_b, truth.as_deref())?;
    if let Some(path) = &args.meta_a {
        report.times_a = Some(fier_cli::compare::read_phase_times(path)?);
    }
    if let Some(path) = &args.meta_b {
        report.times_b = Some(fier_cli::compare::read_phase_times(path)?);
    }
    print!("{}", report.summary());
    if let Some(out) = &args.out {
        write_scatter(&report, out)?;
        println!("scatter: {}", out.display());
    }
    Ok(())
}

fn bench(args: BenchArgs) -> CliResult<()> {
    let template = match &args.spec {
        Some(path) => SyntheticSpec::load(path)?,
        None => SyntheticSpec::scaling_bench(0), // rows overridden per run
    };
    let algorithms: Vec<BenchAlgorithm> = match args.algorithm.as_deref() {
        None => vec![BenchAlgorithm::FierInit, BenchAlgorithm::ReremiBkt],
        Some("fier-init") => vec![BenchAlgorithm::FierInit],
        Some("reremi-bkt") => vec![BenchAlgorithm::ReremiBkt],
        Some(other) => {
            return Err(CliError::config(format!(
                "unknown bench algorithm `{other}`"
            )))
        }
    };
    let mut config = MiningConfig::default();
    if let Some(v) = args.b_jacc {
        config.b_jacc = v;
    }
    if let Some(v) = args.r_jacc {
        config.r_jacc = v;
    }
    if let Some(v) = args.nbuk {
        config.nbuk = v;
    }
    if let Some(v) = args.minsupp {
        config.minsupp = v;
    }
    if let Some(v) = args.minout {
        config.minout = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    let rows = bench_scaling(&template, &config, &args.rows, args.reps, &algorithms)?;
    for row in &rows {
        println!(
            "{:<10} rows {:>8}: median {:.3}s{}  ({} pairs)",
            row.algorithm,
            row.rows,
            row.median_seconds,
            row.growth_ratio
                .map(|r| format!("  x{r:.2} vs previous"))
                .unwrap_or_default(),
            row.pairs_found,
        );
    }
    write_timing_csv(&rows, &args.out)?;
    println!("timings: {}", args.out.display());
    Ok(())
}
