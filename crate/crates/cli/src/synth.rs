//! Synthetic two-sided datasets with planted cross-side pairs at known
//! Jaccard similarities, plus filler noise columns and a ground-truth
//! listing of what was planted.
//!
//! A planted pair is built by drawing a left support, copying it, and
//! flipping membership until the copy hits the target Jaccard; the
//! achieved value (exact up to rounding on whole entities) is what goes
//! into the ground truth. Numerical planted columns place support rows in
//! a high value cluster and the rest in a low one; `value_spread` widens
//! the clusters so interval enumeration has real work to do, while 0
//! collapses them to two constants.

use crate::{CliError, CliResult};
use fier_core::data::{AttributeColumn, ColumnKind, DataTable, Schema, Side};
use fier_core::{Bitset, Tables};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantKind {
    Boolean,
    Categorical,
    Numerical,
}

impl PlantKind {
    fn parse(s: &str) -> CliResult<PlantKind> {
        match s {
            "boolean" => Ok(PlantKind::Boolean),
            "categorical" => Ok(PlantKind::Categorical),
            "numerical" => Ok(PlantKind::Numerical),
            other => Err(CliError::config(format!("unknown planted kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PlantedPair {
    pub jaccard: f64,
    pub kind: PlantKind,
}

/// A planted extension opportunity: the right column misses
/// `missing_frac` of the left support, and a second right column covers
/// exactly the missing rows, so an OR extension can complete the pair.
#[derive(Debug, Clone, Copy)]
pub struct ExtensionPlant {
    pub missing_frac: f64,
}

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub rows: usize,
    pub seed: u64,
    /// Independent noise columns per side, by kind.
    pub numerical_fillers: usize,
    pub boolean_fillers: usize,
    pub categorical_fillers: usize,
    /// Alphabet size of categorical fillers.
    pub categories: usize,
    /// Planted support size as a fraction of the universe.
    pub support_frac: f64,
    /// Width of the numeric value clusters, in [0, 0.5).
    pub value_spread: f64,
    pub planted: Vec<PlantedPair>,
    pub extension_plants: Vec<ExtensionPlant>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            rows: 1000,
            seed: 0,
            numerical_fillers: 4,
            boolean_fillers: 0,
            categorical_fillers: 0,
            categories: 4,
            support_frac: 0.2,
            value_spread: 0.25,
            planted: Vec::new(),
            extension_plants: Vec::new(),
        }
    }
}

impl SyntheticSpec {
    /// The reference benchmark: fourteen planted numeric pairs between
    /// 0.75 and 0.95, two extension plants, six numeric fillers per side,
    /// 2400 rows.
    pub fn reference() -> SyntheticSpec {
        let jaccards = [
            0.95, 0.93, 0.91, 0.89, 0.87, 0.85, 0.84, 0.83, 0.82, 0.81, 0.80, 0.78, 0.76, 0.75,
        ];
        SyntheticSpec {
            rows: 2400,
            seed: 20_240_801,
            numerical_fillers: 6,
            planted: jaccards
                .iter()
                .map(|&jaccard| PlantedPair {
                    jaccard,
                    kind: PlantKind::Numerical,
                })
                .collect(),
            extension_plants: vec![
                ExtensionPlant { missing_frac: 0.12 },
                ExtensionPlant { missing_frac: 0.18 },
            ],
            ..Default::default()
        }
    }

    /// The scaling benchmark shape: 50 numeric attributes per side, two
    /// of them planted. Row count is set by the caller.
    pub fn scaling_bench(rows: usize) -> SyntheticSpec {
        SyntheticSpec {
            rows,
            seed: 77,
            numerical_fillers: 48,
            planted: vec![
                PlantedPair {
                    jaccard: 0.9,
                    kind: PlantKind::Numerical,
                },
                PlantedPair {
                    jaccard: 0.8,
                    kind: PlantKind::Numerical,
                },
            ],
            ..Default::default()
        }
    }

    pub fn load(path: &Path) -> CliResult<SyntheticSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        SyntheticSpec::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<SyntheticSpec> {
        let mut spec = SyntheticSpec {
            planted: Vec::new(),
            ..Default::default()
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "line {}: expected `key = value`",
                    lineno + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| CliError::config(format!("invalid {what}: `{value}`"));
            match key {
                "rows" => spec.rows = value.parse().map_err(|_| bad("rows"))?,
                "seed" => spec.seed = value.parse().map_err(|_| bad("seed"))?,
                "numerical_fillers" => {
                    spec.numerical_fillers = value.parse().map_err(|_| bad("numerical_fillers"))?
                }
                "boolean_fillers" => {
                    spec.boolean_fillers = value.parse().map_err(|_| bad("boolean_fillers"))?
                }
                "categorical_fillers" => {
                    spec.categorical_fillers =
                        value.parse().map_err(|_| bad("categorical_fillers"))?
                }
                "categories" => spec.categories = value.parse().map_err(|_| bad("categories"))?,
                "support_frac" => {
                    spec.support_frac = value.parse().map_err(|_| bad("support_frac"))?
                }
                "value_spread" => {
                    spec.value_spread = value.parse().map_err(|_| bad("value_spread"))?
                }
                "planted" => {
                    for item in value.split(',').filter(|s| !s.trim().is_empty()) {
                        let mut parts = item.trim().split(':');
                        let jaccard: f64 = parts
                            .next()
                            .unwrap_or("")
                            .parse()
                            .map_err(|_| bad("planted"))?;
                        let kind = PlantKind::parse(parts.next().unwrap_or("numerical"))?;
                        spec.planted.push(PlantedPair { jaccard, kind });
                    }
                }
                "extension_plants" => {
                    for item in value.split(',').filter(|s| !s.trim().is_empty()) {
                        let missing_frac: f64 =
                            item.trim().parse().map_err(|_| bad("extension_plants"))?;
                        spec.extension_plants.push(ExtensionPlant { missing_frac });
                    }
                }
                other => return Err(CliError::config(format!("unknown synth key `{other}`"))),
            }
        }
        Ok(spec)
    }

    fn validate(&self) -> CliResult<()> {
        if self.rows == 0 {
            return Err(CliError::config("rows must be positive"));
        }
        if !(0.0..1.0).contains(&self.support_frac) || self.support_frac <= 0.0 {
            return Err(CliError::config("support_frac must be in (0, 1)"));
        }
        if !(0.0..0.5).contains(&self.value_spread) {
            return Err(CliError::config("value_spread must be in [0, 0.5)"));
        }
        if self.categorical_fillers > 0 && self.categories < 2 {
            return Err(CliError::config(
                "categorical fillers need at least 2 categories",
            ));
        }
        for p in &self.planted {
            if !(0.0..=1.0).contains(&p.jaccard) || p.jaccard <= 0.0 {
                return Err(CliError::config(format!(
                    "planted jaccard {} must be in (0, 1]",
                    p.jaccard
                )));
            }
        }
        for e in &self.extension_plants {
            if !(0.0..1.0).contains(&e.missing_frac) || e.missing_frac <= 0.0 {
                return Err(CliError::config(format!(
                    "extension missing_frac {} must be in (0, 1)",
                    e.missing_frac
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthEntry {
    pub left_attr: String,
    pub right_attr: String,
    pub jaccard: f64,
}

pub struct Synthetic {
    pub tables: Tables,
    pub schema: Schema,
    pub ground_truth: Vec<GroundTruthEntry>,
}

/// One side's support materialised as a column of the requested kind.
fn materialise(
    name: &str,
    kind: PlantKind,
    support: &Bitset,
    spread: f64,
    rng: &mut ChaCha8Rng,
) -> AttributeColumn {
    match kind {
        PlantKind::Boolean => AttributeColumn::boolean(name, support.clone()),
        PlantKind::Categorical => {
            let labels: Vec<&str> = (0..support.len())
                .map(|i| if support.get(i) { "pos" } else { "neg" })
                .collect();
            AttributeColumn::categorical(name, &labels)
        }
        PlantKind::Numerical => {
            let values: Vec<f64> = (0..support.len())
                .map(|i| {
                    if support.get(i) {
                        if spread > 0.0 {
                            rng.gen_range((1.0 - spread)..1.0)
                        } else {
                            1.0
                        }
                    } else if spread > 0.0 {
                        rng.gen_range(0.0..spread)
                    } else {
                        0.0
                    }
                })
                .collect();
            AttributeColumn::numerical(name, values)
        }
    }
}

/// Overlap size that realises the target Jaccard for two supports of size
/// `s`, or an error when no whole-entity overlap can reach it.
fn overlap_for(jaccard: f64, s: usize, rows: usize) -> CliResult<usize> {
    let overlap = (2.0 * jaccard * s as f64 / (1.0 + jaccard)).round() as usize;
    if overlap == 0 || overlap > s {
        return Err(CliError::config(format!(
            "planted jaccard {jaccard} unreachable with support {s}"
        )));
    }
    if 2 * s - overlap > rows {
        return Err(CliError::config(format!(
            "planted jaccard {jaccard} needs {} rows, only {rows} available",
            2 * s - overlap
        )));
    }
    Ok(overlap)
}

pub fn generate(spec: &SyntheticSpec) -> CliResult<Synthetic> {
    spec.validate()?;
    let n = spec.rows;
    let s = ((spec.support_frac * n as f64).round() as usize).clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut left_cols: Vec<AttributeColumn> = Vec::new();
    let mut right_cols: Vec<AttributeColumn> = Vec::new();
    let mut ground_truth: Vec<GroundTruthEntry> = Vec::new();

    // planted pairs: left support copied, membership flipped to target
    for (i, plant) in spec.planted.iter().enumerate() {
        let overlap = overlap_for(plant.jaccard, s, n)?;
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        let left_support = Bitset::from_indices(n, pool[..s].iter().copied());
        // keep `overlap` rows, replace the rest with fresh ones
        let right_support =
            Bitset::from_indices(n, pool[s - overlap..2 * s - overlap].iter().copied());
        let achieved = overlap as f64 / (2 * s - overlap) as f64;
        let lname = format!("Lp{i}");
        let rname = format!("Rp{i}");
        let lcol = materialise(
            &lname,
            plant.kind,
            &left_support,
            spec.value_spread,
            &mut rng,
        );
        let rcol = if plant.jaccard >= 1.0 {
            // a perfect pair is literally the same column on both sides
            let mut c = lcol.clone();
            c.name = rname.clone();
            c
        } else {
            materialise(
                &rname,
                plant.kind,
                &right_support,
                spec.value_spread,
                &mut rng,
            )
        };
        left_cols.push(lcol);
        right_cols.push(rcol);
        ground_truth.push(GroundTruthEntry {
            left_attr: lname,
            right_attr: rname,
            jaccard: if plant.jaccard >= 1.0 { 1.0 } else { achieved },
        });
    }

    // extension plants: right column misses part of the left support, a
    // second right column covers exactly the missing rows
    for (i, plant) in spec.extension_plants.iter().enumerate() {
        let missing = ((plant.missing_frac * s as f64).round() as usize).clamp(1, s - 1);
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        let support: Vec<usize> = pool[..s].to_vec();
        let left_support = Bitset::from_indices(n, support.iter().copied());
        let partial = Bitset::from_indices(n, support[missing..].iter().copied());
        let complement = Bitset::from_indices(n, support[..missing].iter().copied());
        let lname = format!("Lx{i}");
        let rname = format!("Rx{i}a");
        let achieved = (s - missing) as f64 / s as f64;
        left_cols.push(materialise(
            &lname,
            PlantKind::Numerical,
            &left_support,
            spec.value_spread,
            &mut rng,
        ));
        right_cols.push(materialise(
            &rname,
            PlantKind::Numerical,
            &partial,
            spec.value_spread,
            &mut rng,
        ));
        right_cols.push(materialise(
            &format!("Rx{i}b"),
            PlantKind::Numerical,
            &complement,
            spec.value_spread,
            &mut rng,
        ));
        ground_truth.push(GroundTruthEntry {
            left_attr: lname,
            right_attr: rname,
            jaccard: achieved,
        });
    }

    // independent fillers
    for side in [Side::Left, Side::Right] {
        let prefix = match side {
            Side::Left => "Lf",
            Side::Right => "Rf",
        };
        let cols = match side {
            Side::Left => &mut left_cols,
            Side::Right => &mut right_cols,
        };
        for i in 0..spec.numerical_fillers {
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            cols.push(AttributeColumn::numerical(format!("{prefix}n{i}"), values));
        }
        for i in 0..spec.boolean_fillers {
            let p = rng.gen_range(0.2..0.8);
            let bits =
                Bitset::from_indices(n, (0..n).filter(|_| rng.gen_bool(p)).collect::<Vec<_>>());
            cols.push(AttributeColumn::boolean(format!("{prefix}b{i}"), bits));
        }
        for i in 0..spec.categorical_fillers {
            let labels: Vec<String> = (0..n)
                .map(|_| format!("k{}", rng.gen_range(0..spec.categories)))
                .collect();
            cols.push(AttributeColumn::categorical(
                format!("{prefix}c{i}"),
                &labels,
            ));
        }
    }

    let mut schema = Schema::new();
    for col in left_cols.iter().chain(&right_cols) {
        let kind = match col.kind_name() {
            "boolean" => ColumnKind::Boolean {
                true_token: "1".into(),
                false_token: "0".into(),
            },
            "categorical" => ColumnKind::Categorical,
            _ => ColumnKind::Numerical,
        };
        schema.declare(col.name.clone(), kind);
    }

    let tables = Tables::new(
        DataTable::new(Side::Left, left_cols).map_err(CliError::from)?,
        DataTable::new(Side::Right, right_cols).map_err(CliError::from)?,
    )?;
    Ok(Synthetic {
        tables,
        schema,
        ground_truth,
    })
}

/// Emit left.csv, right.csv, schema.txt and ground_truth.csv.
pub fn write(synthetic: &Synthetic, out_dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", out_dir.display())))?;
    synthetic.tables.left.write_csv(&out_dir.join("left.csv"))?;
    synthetic
        .tables
        .right
        .write_csv(&out_dir.join("right.csv"))?;
    std::fs::write(out_dir.join("schema.txt"), synthetic.schema.to_text())
        .map_err(|e| CliError::data(format!("cannot write schema: {e}")))?;
    write_ground_truth(&synthetic.ground_truth, &out_dir.join("ground_truth.csv"))
}

pub fn write_ground_truth(entries: &[GroundTruthEntry], path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    w.write_record(["left_attr", "right_attr", "jaccard"])
        .map_err(|e| CliError::data(e.to_string()))?;
    for entry in entries {
        w.write_record([
            entry.left_attr.as_str(),
            entry.right_attr.as_str(),
            &format!("{}", entry.jaccard),
        ])
        .map_err(|e| CliError::data(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::data(e.to_string()))?;
    Ok(())
}

pub fn read_ground_truth(path: &Path) -> CliResult<Vec<GroundTruthEntry>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::data(e.to_string()))?;
        if record.len() != 3 {
            return Err(CliError::data("ground truth rows need 3 columns"));
        }
        out.push(GroundTruthEntry {
            left_attr: record[0].to_string(),
            right_attr: record[1].to_string(),
            jaccard: record[2]
                .parse()
                .map_err(|_| CliError::data(format!("bad jaccard `{}`", &record[2])))?,
        });
    }
    Ok(out)
}
