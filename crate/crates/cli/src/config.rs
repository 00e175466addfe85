//! Run configuration: a key-value text file plus one-to-one flag
//! overrides. Fractions are resolved against the loaded universe size.

use crate::{CliError, CliResult};
use fier_core::extend::ExtensionParams;
use fier_core::pairs::PairMiningParams;
use fier_core::Constraints;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// LSH initial pairs, then LSH-guided extension.
    FierFull,
    /// LSH initial pairs only.
    FierInit,
    /// Exhaustive pairs with on-the-fly discretisation, greedy extension.
    Reremi,
    /// Exhaustive pairs over pre-computed buckets, greedy extension.
    ReremiBkt,
}

impl Algorithm {
    pub fn parse(s: &str) -> CliResult<Algorithm> {
        match s {
            "fier-full" => Ok(Algorithm::FierFull),
            "fier-init" => Ok(Algorithm::FierInit),
            "reremi" => Ok(Algorithm::Reremi),
            "reremi-bkt" => Ok(Algorithm::ReremiBkt),
            other => Err(CliError::config(format!(
                "unknown algorithm `{other}` (expected fier-full, fier-init, reremi or reremi-bkt)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::FierFull => "fier-full",
            Algorithm::FierInit => "fier-init",
            Algorithm::Reremi => "reremi",
            Algorithm::ReremiBkt => "reremi-bkt",
        })
    }
}

/// Full configuration of one mining run.
#[derive(Debug, Clone)]
pub struct MiningConfig {
    pub left: PathBuf,
    pub right: PathBuf,
    pub schema: PathBuf,
    pub algorithm: Algorithm,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub threads: usize,
    // phase 1
    pub b_jacc: usize,
    pub r_jacc: usize,
    pub nbuk: usize,
    pub minsupp: f64,
    pub minout: f64,
    pub minout_mult: f64,
    pub max_cat_combo: usize,
    // phase 2
    pub b_ham: usize,
    pub r_ham: usize,
    pub bucket_schedule: Vec<usize>,
    pub max_length: usize,
    pub beam: usize,
    // constraints
    pub min_accuracy: f64,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            left: PathBuf::new(),
            right: PathBuf::new(),
            schema: PathBuf::new(),
            algorithm: Algorithm::FierFull,
            out_dir: PathBuf::from("."),
            seed: 0,
            threads: 1,
            b_jacc: 40,
            r_jacc: 10,
            nbuk: 40,
            minsupp: 0.1,
            minout: 0.3,
            minout_mult: 1.0,
            max_cat_combo: 3,
            b_ham: 40,
            r_ham: 10,
            bucket_schedule: vec![8, 16, 32, 64],
            max_length: 4,
            beam: 1,
            min_accuracy: 0.0,
        }
    }
}

impl MiningConfig {
    pub fn load(path: &Path) -> CliResult<MiningConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = MiningConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                )));
            };
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    /// Apply one key; flags and config lines share this path.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let bad = |what: &str| CliError::config(format!("invalid {what}: `{value}`"));
        match key {
            "left" => self.left = PathBuf::from(value),
            "right" => self.right = PathBuf::from(value),
            "schema" => self.schema = PathBuf::from(value),
            "algorithm" => self.algorithm = Algorithm::parse(value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "threads" => self.threads = value.parse().map_err(|_| bad("threads"))?,
            "b_jacc" => self.b_jacc = value.parse().map_err(|_| bad("b_jacc"))?,
            "r_jacc" => self.r_jacc = value.parse().map_err(|_| bad("r_jacc"))?,
            "nbuk" => self.nbuk = value.parse().map_err(|_| bad("nbuk"))?,
            "minsupp" => self.minsupp = value.parse().map_err(|_| bad("minsupp"))?,
            "minout" => self.minout = value.parse().map_err(|_| bad("minout"))?,
            "minout_mult" => self.minout_mult = value.parse().map_err(|_| bad("minout_mult"))?,
            "max_cat_combo" => {
                self.max_cat_combo = value.parse().map_err(|_| bad("max_cat_combo"))?
            }
            "b_ham" => self.b_ham = value.parse().map_err(|_| bad("b_ham"))?,
            "r_ham" => self.r_ham = value.parse().map_err(|_| bad("r_ham"))?,
            "bucket_schedule" => {
                self.bucket_schedule =
                    parse_usize_list(value).ok_or_else(|| bad("bucket_schedule"))?
            }
            "max_length" => self.max_length = value.parse().map_err(|_| bad("max_length"))?,
            "beam" => self.beam = value.parse().map_err(|_| bad("beam"))?,
            "min_accuracy" => self.min_accuracy = value.parse().map_err(|_| bad("min_accuracy"))?,
            other => return Err(CliError::config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.left.as_os_str().is_empty()
            || self.right.as_os_str().is_empty()
            || self.schema.as_os_str().is_empty()
        {
            return Err(CliError::config(
                "left, right and schema paths are required",
            ));
        }
        for (name, v) in [
            ("minsupp", self.minsupp),
            ("minout", self.minout),
            ("min_accuracy", self.min_accuracy),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::config(format!(
                    "{name} must be in [0, 1], got {v}"
                )));
            }
        }
        if self.minout_mult < 0.0 {
            return Err(CliError::config("minout_mult must be non-negative"));
        }
        if self.threads == 0 {
            return Err(CliError::config("threads must be at least 1"));
        }
        if self.max_length < 2 {
            return Err(CliError::config("max_length must be at least 2"));
        }
        Ok(())
    }

    /// Resolve fractional thresholds against the universe size.
    pub fn constraints(&self, rows: usize) -> CliResult<Constraints> {
        let min_supp = ((self.minsupp * rows as f64).round() as usize).max(1);
        let min_out = (self.minout * self.minout_mult * rows as f64).round() as usize;
        if min_supp + min_out > rows {
            return Err(CliError::config(format!(
                "minsupp ({min_supp}) + minout ({min_out}) exceeds the {rows}-entity universe"
            )));
        }
        Ok(Constraints {
            min_supp,
            min_out,
            min_accuracy: self.min_accuracy,
            max_length: self.max_length,
        })
    }

    pub fn pair_params(&self) -> PairMiningParams {
        PairMiningParams {
            bands: self.b_jacc,
            rows: self.r_jacc,
            nbuk: self.nbuk,
            max_cat_combo: self.max_cat_combo,
            seed: self.seed,
            threads: self.threads,
        }
    }

    pub fn extension_params(&self) -> ExtensionParams {
        ExtensionParams {
            bands: self.b_ham,
            rows: self.r_ham,
            schedule: self.bucket_schedule.clone(),
            // phase-2 hashes must not correlate with phase 1
            seed: self.seed ^ 0x9e37_79b9_7f4a_7c15,
            beam: self.beam,
            threads: self.threads,
        }
    }

    /// Echo of every key in config-file syntax, for the run metadata.
    pub fn echo(&self) -> String {
        let schedule: Vec<String> = self.bucket_schedule.iter().map(|v| v.to_string()).collect();
        format!(
            "left = {}\nright = {}\nschema = {}\nalgorithm = {}\nout_dir = {}\nseed = {}\nthreads = {}\n\
             b_jacc = {}\nr_jacc = {}\nnbuk = {}\nminsupp = {}\nminout = {}\nminout_mult = {}\nmax_cat_combo = {}\n\
             b_ham = {}\nr_ham = {}\nbucket_schedule = {}\nmax_length = {}\nbeam = {}\nmin_accuracy = {}\n",
            self.left.display(),
            self.right.display(),
            self.schema.display(),
            self.algorithm,
            self.out_dir.display(),
            self.seed,
            self.threads,
            self.b_jacc,
            self.r_jacc,
            self.nbuk,
            self.minsupp,
            self.minout,
            self.minout_mult,
            self.max_cat_combo,
            self.b_ham,
            self.r_ham,
            schedule.join(","),
            self.max_length,
            self.beam,
            self.min_accuracy,
        )
    }
}

pub(crate) fn parse_usize_list(value: &str) -> Option<Vec<usize>> {
    let items: Result<Vec<usize>, _> = value
        .split(',')
        .map(|v| v.trim().parse::<usize>())
        .collect();
    items.ok().filter(|v| !v.is_empty())
}
