//! Property tests for the core invariants: partition conservation,
//! accuracy bounds, fold consistency, grammar round-trips, discretisation
//! guarantees, the merge-min law, extension monotonicity and determinism.

use fier_core::bitset::Bitset;
use fier_core::data::{
    literal_support, load_csv, AttributeColumn, Bucketing, DataTable, Side, Tables,
};
use fier_core::extend::{
    best_literal_extension, build_extension_signatures, fier_ext, ExtensionParams,
};
use fier_core::lsh::{merge_min, minhash_signature, MinhashFamily};
use fier_core::pairs::{fier_init, PairMiningParams};
use fier_core::query::{support_partition, Connective, Constraints, Literal, Query};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

/// A small two-sided dataset with all three column kinds, deterministic in
/// the seed.
fn random_tables(seed: u64, rows: usize) -> Tables {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut make_side = |side: Side, prefix: &str| {
        let mut cols = Vec::new();
        let n_num = rng.gen_range(1..3usize);
        let n_bool = rng.gen_range(1..3usize);
        let n_cat = rng.gen_range(1..2usize);
        for i in 0..n_num {
            // coarse grid so duplicate values occur
            let v: Vec<f64> = (0..rows)
                .map(|_| (rng.gen_range(0..12) as f64) / 3.0)
                .collect();
            cols.push(AttributeColumn::numerical(format!("{prefix}n{i}"), v));
        }
        for i in 0..n_bool {
            let p = rng.gen_range(0.2..0.8);
            let bits = Bitset::from_indices(
                rows,
                (0..rows).filter(|_| rng.gen_bool(p)).collect::<Vec<_>>(),
            );
            cols.push(AttributeColumn::boolean(format!("{prefix}b{i}"), bits));
        }
        for i in 0..n_cat {
            let m = rng.gen_range(2..5);
            let labels: Vec<String> = (0..rows)
                .map(|_| format!("v{}", rng.gen_range(0..m)))
                .collect();
            cols.push(AttributeColumn::categorical(
                format!("{prefix}c{i}"),
                &labels,
            ));
        }
        cols.shuffle(&mut rng);
        DataTable::new(side, cols).unwrap()
    };
    let left = make_side(Side::Left, "L_");
    let right = make_side(Side::Right, "R_");
    Tables::new(left, right).unwrap()
}

/// A random literal over one column of the table.
fn random_literal(rng: &mut ChaCha8Rng, table: &DataTable) -> Literal {
    let col = &table.columns[rng.gen_range(0..table.columns.len())];
    match &col.data {
        fier_core::data::ColumnData::Boolean(_) => Literal::boolean(col.name.clone()),
        fier_core::data::ColumnData::Categorical { alphabet, .. } => {
            let take = rng.gen_range(1..=alphabet.len());
            let mut picks = alphabet.clone();
            picks.shuffle(rng);
            Literal::categories(col.name.clone(), picks.into_iter().take(take))
        }
        fier_core::data::ColumnData::Numerical { values, .. } => {
            let a = values[rng.gen_range(0..values.len())];
            let b = values[rng.gen_range(0..values.len())];
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            match rng.gen_range(0..3) {
                0 => Literal::interval(col.name.clone(), Some(lo), Some(hi)),
                1 => Literal::interval(col.name.clone(), Some(lo), None),
                _ => Literal::interval(col.name.clone(), None, Some(hi)),
            }
        }
    }
}

fn random_query(rng: &mut ChaCha8Rng, table: &DataTable, max_len: usize) -> Query {
    let mut q = Query::single(random_literal(rng, table));
    let extra = rng.gen_range(0..max_len);
    for _ in 0..extra {
        let conn = if rng.gen_bool(0.5) {
            Connective::And
        } else {
            Connective::Or
        };
        q = q.extended(conn, random_literal(rng, table));
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_conserves_the_universe(seed in 0u64..500, rows in 10usize..60) {
        let tables = random_tables(seed, rows);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let lq = random_query(&mut rng, &tables.left, 3);
        let rq = random_query(&mut rng, &tables.right, 3);
        let lsupp = lq.eval(&tables.left).unwrap();
        let rsupp = rq.eval(&tables.right).unwrap();
        let p = support_partition(&lsupp, &rsupp).unwrap();
        prop_assert_eq!(p.total(), rows);
        let acc = p.accuracy();
        prop_assert!((0.0..=1.0).contains(&acc));
        // accuracy is 1 exactly when the supports coincide and are non-empty
        prop_assert_eq!(acc == 1.0, lsupp == rsupp && !lsupp.is_empty());
    }

    #[test]
    fn fold_extension_is_incremental(seed in 0u64..500, rows in 10usize..60) {
        let tables = random_tables(seed, rows);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1234);
        let q = random_query(&mut rng, &tables.left, 3);
        let base = q.eval(&tables.left).unwrap();
        let lit = random_literal(&mut rng, &tables.left);
        let lit_supp = literal_support(&lit, &tables.left).unwrap();
        let anded = q.extended(Connective::And, lit.clone()).eval(&tables.left).unwrap();
        prop_assert_eq!(&anded, &base.and(&lit_supp));
        prop_assert!(anded.is_subset(&base), "AND never grows the support");
        let ored = q.extended(Connective::Or, lit).eval(&tables.left).unwrap();
        prop_assert_eq!(&ored, &base.or(&lit_supp));
        prop_assert!(base.is_subset(&ored), "OR never shrinks the support");
    }

    #[test]
    fn format_parse_round_trip_preserves_support(seed in 0u64..500, rows in 10usize..60) {
        let tables = random_tables(seed, rows);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9999);
        let q = random_query(&mut rng, &tables.left, 4);
        let text = q.format();
        let parsed = Query::parse(&text, &tables.left).unwrap();
        prop_assert_eq!(
            parsed.eval(&tables.left).unwrap(),
            q.eval(&tables.left).unwrap()
        );
        // formatting is a fixpoint
        prop_assert_eq!(parsed.format(), text);
    }

    #[test]
    fn equal_height_invariants(seed in 0u64..300, rows in 8usize..80, nbuk in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // mix of duplicated and distinct values
        let values: Vec<f64> = (0..rows)
            .map(|_| (rng.gen_range(0..20) as f64) / 4.0)
            .collect();
        let col = AttributeColumn::numerical("x", values.clone());
        let table = DataTable::new(Side::Left, vec![col]).unwrap();
        let col = table.column("x").unwrap();
        let b = Bucketing::equal_height(col, nbuk).unwrap();
        prop_assert!(b.bucket_count() <= nbuk);
        prop_assert!(b.bucket_count() >= 1);

        // ties never split
        let assign = b.row_assignment(col);
        for i in 0..rows {
            for j in (i + 1)..rows {
                if values[i] == values[j] {
                    prop_assert_eq!(assign[i], assign[j]);
                }
            }
        }

        // single-bucket literals partition the universe
        let mut seen = Bitset::new(rows);
        for k in 0..b.bucket_count() {
            let lit = b.range_literal("x", k, k + 1);
            let supp = literal_support(&lit, &table).unwrap();
            prop_assert_eq!(seen.intersection_count(&supp), 0);
            seen = seen.or(&supp);
        }
        prop_assert_eq!(seen.count_ones(), rows);

        // interval additivity: a range literal's support is the union of
        // its single-bucket supports
        let k = b.bucket_count();
        let lo = seed as usize % k;
        let hi = lo + 1 + (rows % (k - lo).max(1)).min(k - lo - 1);
        let range = literal_support(&b.range_literal("x", lo, hi), &table).unwrap();
        let mut union = Bitset::new(rows);
        for kk in lo..hi {
            union = union.or(&literal_support(&b.range_literal("x", kk, kk + 1), &table).unwrap());
        }
        prop_assert_eq!(range, union);
    }

    #[test]
    fn equal_height_is_exact_when_divisible(nbuk in 1usize..10, per in 1usize..8, seed in 0u64..100) {
        let rows = nbuk * per;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // all-distinct values
        let mut values: Vec<f64> = (0..rows).map(|i| i as f64).collect();
        values.shuffle(&mut rng);
        let col = AttributeColumn::numerical("x", values);
        let b = Bucketing::equal_height(&col, nbuk).unwrap();
        prop_assert_eq!(b.bucket_count(), nbuk);
        for k in 0..nbuk {
            prop_assert_eq!(b.bucket_len(k), per);
        }
    }

    #[test]
    fn merge_min_law_holds_for_any_supports(seed in 0u64..300) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(20..200);
        let family = MinhashFamily::generate(4, 6, n, seed ^ 0x55).unwrap();
        let a = Bitset::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.3)).collect::<Vec<_>>());
        let b = Bitset::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.3)).collect::<Vec<_>>());
        prop_assume!(!a.is_empty() && !b.is_empty());
        let union = a.or(&b);
        for band in family.bands() {
            let sa = minhash_signature(&a, band).unwrap();
            let sb = minhash_signature(&b, band).unwrap();
            prop_assert_eq!(
                merge_min(&sa, &sb).unwrap(),
                minhash_signature(&union, band).unwrap()
            );
        }
    }
}

#[test]
fn csv_round_trip_preserves_every_literal_support() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..6u64 {
        let tables = random_tables(seed, 40);
        let mut schema = fier_core::data::Schema::new();
        for table in [&tables.left, &tables.right] {
            for col in &table.columns {
                let kind = match col.kind_name() {
                    "boolean" => fier_core::data::ColumnKind::Boolean {
                        true_token: "1".into(),
                        false_token: "0".into(),
                    },
                    "categorical" => fier_core::data::ColumnKind::Categorical,
                    _ => fier_core::data::ColumnKind::Numerical,
                };
                schema.declare(col.name.clone(), kind);
            }
        }
        let path = dir.path().join(format!("t{seed}.csv"));
        tables.left.write_csv(&path).unwrap();
        let reloaded = load_csv(&path, Side::Left, &schema).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        for _ in 0..30 {
            let lit = random_literal(&mut rng, &tables.left);
            assert_eq!(
                literal_support(&lit, &tables.left).unwrap(),
                literal_support(&lit, &reloaded).unwrap(),
                "support changed across a CSV round trip"
            );
        }
    }
}

#[test]
fn mining_is_deterministic_and_thread_count_invariant() {
    let tables = random_tables(7, 64);
    let constraints = Constraints {
        min_supp: 4,
        min_out: 4,
        min_accuracy: 0.0,
        max_length: 4,
    };
    let params = PairMiningParams {
        bands: 10,
        rows: 3,
        nbuk: 6,
        max_cat_combo: 2,
        seed: 99,
        threads: 1,
    };
    let runs: Vec<Vec<(String, String, f64)>> = [1usize, 1, 4]
        .iter()
        .map(|&threads| {
            let p = PairMiningParams {
                threads,
                ..params.clone()
            };
            fier_init(&tables, &p, &constraints)
                .unwrap()
                .redescriptions
                .iter()
                .map(|r| (r.lquery.format(), r.rquery.format(), r.accuracy()))
                .collect()
        })
        .collect();
    assert_eq!(runs[0], runs[1], "same seed, same results");
    assert_eq!(runs[0], runs[2], "thread count must not change results");

    // the extension phase is deterministic too
    let initial = fier_init(&tables, &params, &constraints)
        .unwrap()
        .redescriptions;
    let ext_params = ExtensionParams {
        bands: 6,
        rows: 8,
        schedule: vec![2, 4],
        seed: 3,
        beam: 1,
        threads: 1,
    };
    let store = build_extension_signatures(&tables, &ext_params).unwrap();
    let a = fier_ext(initial.clone(), &store, &tables, &constraints, &ext_params).unwrap();
    let b = fier_ext(initial, &store, &tables, &constraints, &ext_params).unwrap();
    let render = |o: &fier_core::extend::ExtensionOutcome| -> Vec<String> {
        o.results
            .iter()
            .map(|r| {
                format!(
                    "{} / {} @ {}",
                    r.lquery.format(),
                    r.rquery.format(),
                    r.accuracy()
                )
            })
            .collect()
    };
    assert_eq!(render(&a), render(&b));
}

#[test]
fn accepted_extensions_strictly_improve_and_stay_monotone() {
    for seed in 0..8u64 {
        let tables = random_tables(seed.wrapping_mul(31) + 3, 70);
        let constraints = Constraints {
            min_supp: 5,
            min_out: 5,
            min_accuracy: 0.0,
            max_length: 5,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lq = random_query(&mut rng, &tables.left, 1);
        let rq = random_query(&mut rng, &tables.right, 1);
        let red = fier_core::pairs::MinedRedescription::build(lq, rq, &tables).unwrap();
        for side in [Side::Left, Side::Right] {
            let table = tables.side(side);
            for col in 0..table.columns.len() as u32 {
                for op in [Connective::And, Connective::Or] {
                    let Ok(Some(ext)) =
                        best_literal_extension(&red, col, side, op, &tables, &constraints)
                    else {
                        continue;
                    };
                    assert_eq!(
                        ext.partition.cmp_accuracy(&red.partition),
                        Ordering::Greater,
                        "extension must strictly improve"
                    );
                    let (old_side, new_side) = match side {
                        Side::Left => (&red.lsupp, &ext.lsupp),
                        Side::Right => (&red.rsupp, &ext.rsupp),
                    };
                    match op {
                        Connective::And => assert!(new_side.is_subset(old_side)),
                        Connective::Or => assert!(old_side.is_subset(new_side)),
                    }
                }
            }
        }
    }
}
