//! Initial-pair generation.
//!
//! The LSH miner signs every admissible literal on both sides per band
//! (fresh hash functions each band), bins literals by exact signature and
//! pairs across sides within a bin; pairs are deduplicated across bands and
//! verified exactly against the raw bitsets before anything is returned.
//! Numerical attributes are discretised once into equal-height buckets and
//! intervals are enumerated by narrowing, signing each interval as the
//! element-wise minimum of its bucket signatures and filtering subintervals
//! whose signature repeats a stored superinterval's.
//!
//! The exhaustive counterpart iterates every cross-side attribute pair and
//! every literal pair over them, computing supports exactly; it is the
//! oracle and the speed baseline the LSH path is measured against.

use crate::bitset::Bitset;
use crate::data::{
    literal_support, AttributeColumn, Bucketing, ColumnData, DataTable, Side, Tables,
};
use crate::error::Error;
use crate::lsh::{merge_min, MinhashFamily, MinhashTable, Signature, SignatureBins};
use crate::query::{support_partition, Constraints, Literal, Partition, Query, Redescription};
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use std::cmp::Ordering;

/// LSH parameters for the initial-pair phase.
#[derive(Debug, Clone)]
pub struct PairMiningParams {
    /// Number of bands (independent repetitions).
    pub bands: usize,
    /// Minhash values per band.
    pub rows: usize,
    /// Equal-height buckets for numerical attributes.
    pub nbuk: usize,
    /// Largest disjunction of categories considered as one literal.
    pub max_cat_combo: usize,
    pub seed: u64,
    /// Worker threads; 1 runs everything inline.
    pub threads: usize,
}

impl Default for PairMiningParams {
    fn default() -> Self {
        PairMiningParams {
            bands: 40,
            rows: 10,
            nbuk: 40,
            max_cat_combo: 3,
            seed: 0,
            threads: 1,
        }
    }
}

/// A cross-side literal pair produced by co-binning, tagged with the band
/// where it first matched.
#[derive(Debug, Clone)]
pub struct CandidatePair {
    pub left: Literal,
    pub right: Literal,
    pub band: usize,
}

/// A verified redescription with cached supports; the working type of the
/// miner and extender.
#[derive(Debug, Clone)]
pub struct MinedRedescription {
    pub lquery: Query,
    pub rquery: Query,
    pub lsupp: Bitset,
    pub rsupp: Bitset,
    pub partition: Partition,
    /// Sorted column indices used by each query.
    pub left_attrs: Vec<u32>,
    pub right_attrs: Vec<u32>,
    /// Trace identity; parents link extension steps back to initial pairs.
    pub id: u64,
    pub parent: Option<u64>,
}

impl MinedRedescription {
    pub fn from_parts(
        lquery: Query,
        rquery: Query,
        lsupp: Bitset,
        rsupp: Bitset,
        tables: &Tables,
    ) -> Result<Self, Error> {
        let partition = support_partition(&lsupp, &rsupp)?;
        let left_attrs = attr_indices(&lquery, &tables.left)?;
        let right_attrs = attr_indices(&rquery, &tables.right)?;
        Ok(MinedRedescription {
            lquery,
            rquery,
            lsupp,
            rsupp,
            partition,
            left_attrs,
            right_attrs,
            id: 0,
            parent: None,
        })
    }

    /// Evaluate both queries from scratch.
    pub fn build(lquery: Query, rquery: Query, tables: &Tables) -> Result<Self, Error> {
        let lsupp = lquery.eval(&tables.left)?;
        let rsupp = rquery.eval(&tables.right)?;
        MinedRedescription::from_parts(lquery, rquery, lsupp, rsupp, tables)
    }

    pub fn accuracy(&self) -> f64 {
        self.partition.accuracy()
    }

    pub fn literal_count(&self) -> usize {
        self.lquery.literal_count() + self.rquery.literal_count()
    }

    pub fn to_redescription(&self) -> Redescription {
        Redescription {
            lquery: self.lquery.clone(),
            rquery: self.rquery.clone(),
            partition: self.partition,
        }
    }
}

fn attr_indices(query: &Query, table: &DataTable) -> Result<Vec<u32>, Error> {
    let mut idx = Vec::with_capacity(query.literal_count());
    for lit in query.literals() {
        let i = table
            .column_index(&lit.attribute)
            .ok_or_else(|| Error::UnknownAttribute(lit.attribute.clone()))?;
        idx.push(i as u32);
    }
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

fn cmp_f64_opt(a: &Option<f64>, b: &Option<f64>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(y),
    }
}

fn cmp_literal(a: &Literal, b: &Literal) -> Ordering {
    use crate::query::Predicate::*;
    a.attribute
        .cmp(&b.attribute)
        .then_with(|| match (&a.predicate, &b.predicate) {
            (BoolTrue, BoolTrue) => Ordering::Equal,
            (BoolTrue, _) => Ordering::Less,
            (_, BoolTrue) => Ordering::Greater,
            (InCategories(x), InCategories(y)) => x.cmp(y),
            (InCategories(_), _) => Ordering::Less,
            (_, InCategories(_)) => Ordering::Greater,
            (Interval { lo: l1, hi: h1 }, Interval { lo: l2, hi: h2 }) => {
                cmp_f64_opt(l1, l2).then_with(|| cmp_f64_opt(h1, h2))
            }
        })
}

fn cmp_query(a: &Query, b: &Query) -> Ordering {
    a.literal_count().cmp(&b.literal_count()).then_with(|| {
        for (x, y) in a.literals().zip(b.literals()) {
            let ord = cmp_literal(x, y);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    })
}

/// Accuracy descending, then attribute indices, then literal bounds
/// ascending. Total and deterministic, which pins the output order of
/// every mining mode.
pub fn canonical_cmp(a: &MinedRedescription, b: &MinedRedescription) -> Ordering {
    b.partition
        .cmp_accuracy(&a.partition)
        .then_with(|| a.left_attrs.cmp(&b.left_attrs))
        .then_with(|| a.right_attrs.cmp(&b.right_attrs))
        .then_with(|| cmp_query(&a.lquery, &b.lquery))
        .then_with(|| cmp_query(&a.rquery, &b.rquery))
}

/// Result of an initial-pair run.
#[derive(Debug)]
pub struct InitialPairs {
    /// Verified redescriptions in canonical order.
    pub redescriptions: Vec<MinedRedescription>,
    /// Distinct candidate pairs that reached verification.
    pub candidate_pairs: usize,
}

#[derive(Debug, Clone, Copy)]
struct KindFilter {
    boolean: bool,
    categorical: bool,
    numerical: bool,
}

impl KindFilter {
    const ALL: KindFilter = KindFilter {
        boolean: true,
        categorical: true,
        numerical: true,
    };

    fn admits(&self, col: &AttributeColumn) -> bool {
        match col.data {
            ColumnData::Boolean(_) => self.boolean,
            ColumnData::Categorical { .. } => self.categorical,
            ColumnData::Numerical { .. } => self.numerical,
        }
    }
}

/// Literal identity inside one run: side, column, and payload in terms of
/// alphabet codes or bucket ranges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct LitKey {
    side: Side,
    col: u32,
    payload: LitPayload,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum LitPayload {
    Bool,
    Cat(Vec<u32>),
    /// Half-open bucket range `lo..hi`.
    Num(u32, u32),
}

#[derive(Default)]
struct Registry {
    keys: Vec<LitKey>,
    index: FxHashMap<LitKey, u32>,
}

impl Registry {
    fn intern(&mut self, key: LitKey) -> u32 {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.keys.len() as u32;
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        id
    }

    fn literal(&self, id: u32, prep: &Prepared) -> Literal {
        let key = &self.keys[id as usize];
        let side = prep.side(key.side);
        let col = &side.columns[key.col as usize];
        match &key.payload {
            LitPayload::Bool => Literal::boolean(col.name.clone()),
            LitPayload::Cat(codes) => {
                let alphabet = col.alphabet().expect("categorical literal");
                Literal::categories(
                    col.name.clone(),
                    codes.iter().map(|&c| alphabet[c as usize].clone()),
                )
            }
            LitPayload::Num(lo, hi) => {
                let bucketing = side.bucketing[key.col as usize]
                    .as_ref()
                    .expect("numerical literal");
                bucketing.range_literal(&col.name, *lo as usize, *hi as usize)
            }
        }
    }
}

/// Per-side preprocessing shared by all bands: category row lists and one
/// equal-height bucketing per numerical column.
struct PreparedSide<'a> {
    columns: &'a [AttributeColumn],
    cat_rows: Vec<Option<Vec<Vec<u32>>>>,
    bucketing: Vec<Option<Bucketing>>,
}

struct Prepared<'a> {
    left: PreparedSide<'a>,
    right: PreparedSide<'a>,
}

impl<'a> Prepared<'a> {
    fn side(&self, side: Side) -> &PreparedSide<'a> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

fn prepare_side<'a>(
    table: &'a DataTable,
    filter: KindFilter,
    nbuk: usize,
) -> Result<PreparedSide<'a>, Error> {
    let mut cat_rows = Vec::with_capacity(table.columns.len());
    let mut bucketing = Vec::with_capacity(table.columns.len());
    for col in &table.columns {
        match &col.data {
            ColumnData::Categorical { codes, alphabet } if filter.categorical => {
                let mut rows: Vec<Vec<u32>> = vec![Vec::new(); alphabet.len()];
                for (row, &code) in codes.iter().enumerate() {
                    rows[code as usize].push(row as u32);
                }
                cat_rows.push(Some(rows));
                bucketing.push(None);
            }
            ColumnData::Numerical { .. } if filter.numerical => {
                cat_rows.push(None);
                bucketing.push(Some(Bucketing::equal_height(col, nbuk)?));
            }
            _ => {
                cat_rows.push(None);
                bucketing.push(None);
            }
        }
    }
    Ok(PreparedSide {
        columns: &table.columns,
        cat_rows,
        bucketing,
    })
}

fn validate(
    tables: &Tables,
    params: &PairMiningParams,
    constraints: &Constraints,
    filter: KindFilter,
) -> Result<(), Error> {
    let n = tables.rows();
    if n == 0 {
        return Err(Error::InvalidParams("tables are empty".into()));
    }
    if params.bands == 0 || params.rows == 0 {
        return Err(Error::InvalidParams(
            "bands and rows must be positive".into(),
        ));
    }
    if params.max_cat_combo == 0 {
        return Err(Error::InvalidParams(
            "max_cat_combo must be at least 1".into(),
        ));
    }
    if constraints.min_supp == 0 {
        return Err(Error::InvalidParams("minsupp must be at least 1".into()));
    }
    if constraints.min_supp + constraints.min_out > n {
        return Err(Error::InvalidParams(format!(
            "minsupp {} + minout {} exceeds {n} entities",
            constraints.min_supp, constraints.min_out
        )));
    }
    if constraints.max_length < 2 {
        return Err(Error::InvalidParams("max_length must be at least 2".into()));
    }
    let has_numeric = [&tables.left, &tables.right].iter().any(|t| {
        t.columns
            .iter()
            .any(|c| matches!(c.data, ColumnData::Numerical { .. }))
    });
    if filter.numerical && has_numeric && params.nbuk < 2 {
        return Err(Error::InvalidParams(
            "nbuk must be at least 2 for numerical attributes".into(),
        ));
    }
    Ok(())
}

/// LSH initial pairs over every attribute kind, one bin space per band so
/// literals of different kinds can pair.
pub fn fier_init(
    tables: &Tables,
    params: &PairMiningParams,
    constraints: &Constraints,
) -> Result<InitialPairs, Error> {
    fier_init_filtered(tables, params, constraints, KindFilter::ALL)
}

/// Boolean attributes only.
pub fn fier_init_boolean(
    tables: &Tables,
    params: &PairMiningParams,
    constraints: &Constraints,
) -> Result<InitialPairs, Error> {
    fier_init_filtered(
        tables,
        params,
        constraints,
        KindFilter {
            boolean: true,
            categorical: false,
            numerical: false,
        },
    )
}

/// Categorical attributes only (single categories and disjunctions of up
/// to `max_cat_combo` categories).
pub fn fier_init_categorical(
    tables: &Tables,
    params: &PairMiningParams,
    constraints: &Constraints,
) -> Result<InitialPairs, Error> {
    fier_init_filtered(
        tables,
        params,
        constraints,
        KindFilter {
            boolean: false,
            categorical: true,
            numerical: false,
        },
    )
}

/// Numerical attributes only (equal-height buckets, narrowed intervals).
pub fn fier_init_numerical(
    tables: &Tables,
    params: &PairMiningParams,
    constraints: &Constraints,
) -> Result<InitialPairs, Error> {
    fier_init_filtered(
        tables,
        params,
        constraints,
        KindFilter {
            boolean: false,
            categorical: false,
            numerical: true,
        },
    )
}

fn fier_init_filtered(
    tables: &Tables,
    params: &PairMiningParams,
    constraints: &Constraints,
    filter: KindFilter,
) -> Result<InitialPairs, Error> {
    validate(tables, params, constraints, filter)?;
    let n = tables.rows();
    let prep = Prepared {
        left: prepare_side(&tables.left, filter, params.nbuk)?,
        right: prepare_side(&tables.right, filter, params.nbuk)?,
    };
    let family = MinhashFamily::generate(params.bands, params.rows, n, params.seed)?;

    let pool = build_pool(params.threads)?;
    let mut registry = Registry::default();
    let mut seen: FxHashSet<(u32, u32)> = FxHashSet::default();
    let mut candidates: Vec<(u32, u32, usize)> = Vec::new();

    for band in 0..params.bands {
        let table = family.band(band).precompute(n);
        let mut bins = SignatureBins::new();
        for side in [Side::Left, Side::Right] {
            let pside = prep.side(side);
            let sign_one = |(col_idx, col): (usize, &AttributeColumn)| -> Vec<(Signature, LitKey)> {
                if !filter.admits(col) {
                    return Vec::new();
                }
                let mut items = Vec::new();
                sign_column(
                    col,
                    col_idx as u32,
                    side,
                    pside,
                    &table,
                    n,
                    params,
                    constraints,
                    &mut items,
                );
                items
            };
            let signed: Vec<Vec<(Signature, LitKey)>> = match &pool {
                Some(pool) => {
                    pool.install(|| pside.columns.par_iter().enumerate().map(sign_one).collect())
                }
                None => pside.columns.iter().enumerate().map(sign_one).collect(),
            };
            // bin insertion is serialised in column order; right-side
            // literals whose bin has no left occupant are discarded
            for items in signed {
                for (sig, key) in items {
                    if side == Side::Right && !bins.has_left(&sig) {
                        continue;
                    }
                    let id = registry.intern(key);
                    bins.insert(&sig, id, side);
                }
            }
        }
        for (l, r) in bins.pairs() {
            if seen.insert((l, r)) {
                candidates.push((l, r, band));
            }
        }
    }

    let cand_pairs: Vec<CandidatePair> = candidates
        .iter()
        .map(|&(l, r, band)| CandidatePair {
            left: registry.literal(l, &prep),
            right: registry.literal(r, &prep),
            band,
        })
        .collect();
    let redescriptions = verify_candidates(&cand_pairs, tables, constraints, params.threads)?;
    Ok(InitialPairs {
        redescriptions,
        candidate_pairs: cand_pairs.len(),
    })
}

pub(crate) fn build_pool(threads: usize) -> Result<Option<rayon::ThreadPool>, Error> {
    if threads <= 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn sign_column(
    col: &AttributeColumn,
    col_idx: u32,
    side: Side,
    pside: &PreparedSide,
    table: &MinhashTable,
    n: usize,
    params: &PairMiningParams,
    constraints: &Constraints,
    out: &mut Vec<(Signature, LitKey)>,
) {
    match &col.data {
        ColumnData::Boolean(bits) => {
            if bits.is_empty() {
                return;
            }
            let sig = sign_rows(bits.iter_ones(), table);
            out.push((
                sig,
                LitKey {
                    side,
                    col: col_idx,
                    payload: LitPayload::Bool,
                },
            ));
        }
        ColumnData::Categorical { .. } => {
            let cat_rows = pside.cat_rows[col_idx as usize]
                .as_ref()
                .expect("prepared categorical rows");
            sign_categorical(cat_rows, col_idx, side, table, n, params, constraints, out);
        }
        ColumnData::Numerical { sorted_rows, .. } => {
            let bucketing = pside.bucketing[col_idx as usize]
                .as_ref()
                .expect("prepared bucketing");
            sign_numerical(
                bucketing,
                sorted_rows,
                col_idx,
                side,
                table,
                n,
                constraints,
                out,
            );
        }
    }
}

fn sign_rows(rows: impl IntoIterator<Item = usize>, table: &MinhashTable) -> Signature {
    let r = table.r();
    let mut sig = vec![u64::MAX; r];
    for row in rows {
        let h = table.row(row);
        for j in 0..r {
            let v = h[j] as u64;
            if v < sig[j] {
                sig[j] = v;
            }
        }
    }
    sig
}

/// Single categories are signed like Boolean literals; combinations of up
/// to `max_cat_combo` categories reuse the singles' signatures through
/// `merge_min` and are skipped when their summed support violates
/// minsupp/minout.
#[allow(clippy::too_many_arguments)]
fn sign_categorical(
    cat_rows: &[Vec<u32>],
    col_idx: u32,
    side: Side,
    table: &MinhashTable,
    n: usize,
    params: &PairMiningParams,
    constraints: &Constraints,
    out: &mut Vec<(Signature, LitKey)>,
) {
    let m = cat_rows.len();
    let sigs: Vec<Option<Signature>> = cat_rows
        .iter()
        .map(|rows| {
            if rows.is_empty() {
                None
            } else {
                Some(sign_rows(rows.iter().map(|&r| r as usize), table))
            }
        })
        .collect();

    for (c, sig) in sigs.iter().enumerate() {
        if let Some(sig) = sig {
            out.push((
                sig.clone(),
                LitKey {
                    side,
                    col: col_idx,
                    payload: LitPayload::Cat(vec![c as u32]),
                },
            ));
        }
    }

    if params.max_cat_combo < 2 || m < 2 {
        return;
    }
    let mut codes: Vec<u32> = Vec::with_capacity(params.max_cat_combo);
    let mut stack_sig: Vec<Signature> = Vec::with_capacity(params.max_cat_combo);
    combine_categories(
        &sigs,
        cat_rows,
        params.max_cat_combo,
        constraints,
        n,
        col_idx,
        side,
        0,
        0,
        &mut codes,
        &mut stack_sig,
        out,
    );
}

#[allow(clippy::too_many_arguments)]
fn combine_categories(
    sigs: &[Option<Signature>],
    cat_rows: &[Vec<u32>],
    max_combo: usize,
    constraints: &Constraints,
    n: usize,
    col_idx: u32,
    side: Side,
    start: usize,
    count: usize,
    codes: &mut Vec<u32>,
    stack_sig: &mut Vec<Signature>,
    out: &mut Vec<(Signature, LitKey)>,
) {
    for c in start..sigs.len() {
        let Some(sig) = &sigs[c] else { continue };
        let count2 = count + cat_rows[c].len();
        // unions only grow, so an oversized combination prunes its supersets
        if count2 > n - constraints.min_out {
            continue;
        }
        let merged = match stack_sig.last() {
            Some(prev) => merge_min(prev, sig).expect("equal band widths"),
            None => sig.clone(),
        };
        codes.push(c as u32);
        stack_sig.push(merged);
        if codes.len() >= 2 && count2 >= constraints.min_supp {
            out.push((
                stack_sig.last().unwrap().clone(),
                LitKey {
                    side,
                    col: col_idx,
                    payload: LitPayload::Cat(codes.clone()),
                },
            ));
        }
        if codes.len() < max_combo {
            combine_categories(
                sigs,
                cat_rows,
                max_combo,
                constraints,
                n,
                col_idx,
                side,
                c + 1,
                count2,
                codes,
                stack_sig,
                out,
            );
        }
        codes.pop();
        stack_sig.pop();
    }
}

/// Interval enumeration over one bucketed attribute within one band.
///
/// For each lower edge the upper edge first shrinks until the interval
/// leaves at least `minout` entities uncovered, then keeps shrinking while
/// the support stays above `minsupp`; each interval's signature is the
/// prefix minimum of its bucket signatures, and an interval is stored only
/// if no stored interval with the same signature already reaches further
/// right.
#[allow(clippy::too_many_arguments)]
fn sign_numerical(
    bucketing: &Bucketing,
    sorted_rows: &[u32],
    col_idx: u32,
    side: Side,
    table: &MinhashTable,
    n: usize,
    constraints: &Constraints,
    out: &mut Vec<(Signature, LitKey)>,
) {
    let k = bucketing.bucket_count();
    let r = table.r();

    let mut bucket_sigs = vec![u64::MAX; k * r];
    for b in 0..k {
        let (s, e) = bucketing.range_positions(b, b + 1);
        let dst = &mut bucket_sigs[b * r..(b + 1) * r];
        for &row in &sorted_rows[s..e] {
            let h = table.row(row as usize);
            for j in 0..r {
                let v = h[j] as u64;
                if v < dst[j] {
                    dst[j] = v;
                }
            }
        }
    }

    let mut max_seen_upper: FxHashMap<Signature, usize> = FxHashMap::default();
    let mut prefix = vec![u64::MAX; k * r];
    for lo in 0..k {
        let mut u = k;
        while u > lo && bucketing.range_count(lo, u) > n - constraints.min_out {
            u -= 1;
        }
        if u == lo {
            continue;
        }
        prefix[..r].copy_from_slice(&bucket_sigs[lo * r..(lo + 1) * r]);
        for i in 1..(u - lo) {
            for j in 0..r {
                prefix[i * r + j] = prefix[(i - 1) * r + j].min(bucket_sigs[(lo + i) * r + j]);
            }
        }
        while u > lo && bucketing.range_count(lo, u) >= constraints.min_supp {
            let sig = &prefix[(u - lo - 1) * r..(u - lo) * r];
            let store = match max_seen_upper.get(sig) {
                None => true,
                Some(&prev) => u > prev,
            };
            if store {
                let sig = sig.to_vec();
                out.push((
                    sig.clone(),
                    LitKey {
                        side,
                        col: col_idx,
                        payload: LitPayload::Num(lo as u32, u as u32),
                    },
                ));
                max_seen_upper.insert(sig, u);
            }
            u -= 1;
        }
    }
}

/// Exact verification: recompute each candidate's partition from raw
/// bitsets, keep those that satisfy the constraints, sorted by accuracy
/// descending with deterministic tie-breaking.
pub fn verify_candidates(
    cands: &[CandidatePair],
    tables: &Tables,
    constraints: &Constraints,
    threads: usize,
) -> Result<Vec<MinedRedescription>, Error> {
    // materialise each distinct literal support once
    let mut cache: FxHashMap<(Side, String), usize> = FxHashMap::default();
    let mut literals: Vec<(Side, Literal)> = Vec::new();
    let mut resolved: Vec<(usize, usize)> = Vec::with_capacity(cands.len());
    for cand in cands {
        let mut resolve = |side: Side, lit: &Literal| {
            *cache.entry((side, lit.to_string())).or_insert_with(|| {
                literals.push((side, lit.clone()));
                literals.len() - 1
            })
        };
        let l = resolve(Side::Left, &cand.left);
        let r = resolve(Side::Right, &cand.right);
        resolved.push((l, r));
    }

    let pool = build_pool(threads)?;
    let materialise = |(side, lit): &(Side, Literal)| literal_support(lit, tables.side(*side));
    let supports: Result<Vec<Bitset>, Error> = match &pool {
        Some(pool) => pool.install(|| literals.par_iter().map(materialise).collect()),
        None => literals.iter().map(materialise).collect(),
    };
    let supports = supports?;

    let check_one =
        |(cand, &(li, ri)): (&CandidatePair, &(usize, usize))| -> Option<MinedRedescription> {
            let lsupp = &supports[li];
            let rsupp = &supports[ri];
            let partition = support_partition(lsupp, rsupp).expect("same universe");
            if constraints.check(&partition, 2).is_err() {
                return None;
            }
            Some(
                MinedRedescription::from_parts(
                    Query::single(cand.left.clone()),
                    Query::single(cand.right.clone()),
                    lsupp.clone(),
                    rsupp.clone(),
                    tables,
                )
                .expect("candidate literals reference loaded columns"),
            )
        };
    let zipped: Vec<(&CandidatePair, &(usize, usize))> = cands.iter().zip(&resolved).collect();
    let mut verified: Vec<MinedRedescription> = match &pool {
        Some(pool) => pool.install(|| zipped.par_iter().filter_map(|p| check_one(*p)).collect()),
        None => zipped.iter().filter_map(|p| check_one(*p)).collect(),
    };
    verified.sort_by(canonical_cmp);
    for (i, red) in verified.iter_mut().enumerate() {
        red.id = i as u64;
    }
    Ok(verified)
}

/// Keep only the best redescription per (left attributes, right
/// attributes) key, in canonical order. This is the per-column-pair view
/// used for reporting and comparison; the full list feeds extension.
pub fn best_per_attribute_pair(reds: &[MinedRedescription]) -> Vec<MinedRedescription> {
    let mut best: FxHashMap<(&[u32], &[u32]), &MinedRedescription> = FxHashMap::default();
    for red in reds {
        let key = (red.left_attrs.as_slice(), red.right_attrs.as_slice());
        best.entry(key)
            .and_modify(|cur| {
                if canonical_cmp(red, cur) == Ordering::Less {
                    *cur = red;
                }
            })
            .or_insert(red);
    }
    let mut out: Vec<MinedRedescription> = best.into_values().cloned().collect();
    out.sort_by(canonical_cmp);
    out
}

/// How the exhaustive baseline discretises numerical attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExhaustiveMode {
    /// Interval endpoints range over all distinct observed values: the
    /// reference search, quadratic in distinct values per attribute.
    OnTheFly,
    /// Interval endpoints restricted to the equal-height bucket edges, as
    /// in pre-bucketed mining.
    PreBucketed,
}

enum LitSpace {
    Bool {
        rows: Vec<u32>,
        bits: Bitset,
    },
    Cat {
        /// Category combinations with payload, rows and support, in
        /// enumeration order.
        combos: Vec<(LitPayload, Vec<u32>, Bitset)>,
    },
    Num {
        bucketing: Bucketing,
        /// Rows of buckets `lo..hi` are `rows_by_bucket[pos[lo]..pos[hi]]`.
        rows_by_bucket: Vec<u32>,
        assignment: Vec<u32>,
    },
}

fn build_space(
    col: &AttributeColumn,
    mode: ExhaustiveMode,
    nbuk: usize,
    max_cat_combo: usize,
    constraints: &Constraints,
    n: usize,
) -> Result<LitSpace, Error> {
    match &col.data {
        ColumnData::Boolean(bits) => Ok(LitSpace::Bool {
            rows: bits.iter_ones().map(|i| i as u32).collect(),
            bits: bits.clone(),
        }),
        ColumnData::Categorical { codes, alphabet } => {
            let mut per_cat: Vec<Vec<u32>> = vec![Vec::new(); alphabet.len()];
            for (row, &code) in codes.iter().enumerate() {
                per_cat[code as usize].push(row as u32);
            }
            let mut combos = Vec::new();
            enumerate_cat_combos(
                &per_cat,
                max_cat_combo,
                constraints,
                n,
                0,
                &mut Vec::new(),
                &mut Vec::new(),
                &mut combos,
            );
            let combos = combos
                .into_iter()
                .map(|(codes, rows)| {
                    let bits = Bitset::from_indices(n, rows.iter().map(|&r| r as usize));
                    (LitPayload::Cat(codes), rows, bits)
                })
                .collect();
            Ok(LitSpace::Cat { combos })
        }
        ColumnData::Numerical { sorted_rows, .. } => {
            let buckets = match mode {
                ExhaustiveMode::PreBucketed => nbuk,
                // one bucket per distinct value: equal-height with a target
                // occupancy of one collapses each tie group into one bucket
                ExhaustiveMode::OnTheFly => n,
            };
            let bucketing = Bucketing::equal_height(col, buckets)?;
            let assignment = bucketing.row_assignment(col);
            Ok(LitSpace::Num {
                bucketing,
                rows_by_bucket: sorted_rows.clone(),
                assignment,
            })
        }
    }
}

/// All category subsets of size 1..=max with support-size gates; a subset
/// that already covers too much prunes its supersets.
#[allow(clippy::too_many_arguments)]
fn enumerate_cat_combos(
    per_cat: &[Vec<u32>],
    max_combo: usize,
    constraints: &Constraints,
    n: usize,
    start: usize,
    stack: &mut Vec<u32>,
    rows: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, Vec<u32>)>,
) {
    for c in start..per_cat.len() {
        if per_cat[c].is_empty() {
            continue;
        }
        let count2 = rows.len() + per_cat[c].len();
        if count2 > n - constraints.min_out {
            continue;
        }
        let before = rows.len();
        rows.extend_from_slice(&per_cat[c]);
        stack.push(c as u32);
        if count2 >= constraints.min_supp {
            out.push((stack.clone(), rows.clone()));
        }
        if stack.len() < max_combo {
            enumerate_cat_combos(per_cat, max_combo, constraints, n, c + 1, stack, rows, out);
        }
        stack.pop();
        rows.truncate(before);
    }
}

struct BestTracker {
    best: Option<(Partition, LitPayload, LitPayload)>,
}

impl BestTracker {
    fn new() -> Self {
        BestTracker { best: None }
    }

    /// Strictly-better accuracy only, so the first candidate in
    /// enumeration order wins ties (bounds ascending).
    fn offer(&mut self, partition: Partition, left: &LitPayload, right: &LitPayload) {
        let better = match &self.best {
            None => true,
            Some((cur, _, _)) => partition.cmp_accuracy(cur) == Ordering::Greater,
        };
        if better {
            self.best = Some((partition, left.clone(), right.clone()));
        }
    }
}

/// The ReReMi-style baseline: for every cross-side attribute pair, the
/// best-accuracy literal pair satisfying the constraints. Supports are
/// evaluated per literal pair (each left literal's rows are counted into
/// the right attribute's buckets), with nothing shared across attribute
/// pairs.
pub fn exhaustive_pairs(
    tables: &Tables,
    constraints: &Constraints,
    mode: ExhaustiveMode,
    nbuk: usize,
    max_cat_combo: usize,
    threads: usize,
) -> Result<Vec<MinedRedescription>, Error> {
    let n = tables.rows();
    if n == 0 {
        return Err(Error::InvalidParams("tables are empty".into()));
    }
    let has_numeric = [&tables.left, &tables.right].iter().any(|t| {
        t.columns
            .iter()
            .any(|c| matches!(c.data, ColumnData::Numerical { .. }))
    });
    if mode == ExhaustiveMode::PreBucketed && has_numeric && nbuk < 2 {
        return Err(Error::InvalidParams(
            "nbuk must be at least 2 for numerical attributes".into(),
        ));
    }

    let left_spaces: Vec<LitSpace> = tables
        .left
        .columns
        .iter()
        .map(|c| build_space(c, mode, nbuk, max_cat_combo, constraints, n))
        .collect::<Result<_, _>>()?;
    let right_spaces: Vec<LitSpace> = tables
        .right
        .columns
        .iter()
        .map(|c| build_space(c, mode, nbuk, max_cat_combo, constraints, n))
        .collect::<Result<_, _>>()?;

    let pairs: Vec<(usize, usize)> = (0..left_spaces.len())
        .flat_map(|l| (0..right_spaces.len()).map(move |r| (l, r)))
        .collect();

    type PairBest = (usize, usize, Partition, LitPayload, LitPayload);
    let solve = |&(l, r): &(usize, usize)| -> Option<PairBest> {
        let mut tracker = BestTracker::new();
        best_for_attribute_pair(
            &left_spaces[l],
            &right_spaces[r],
            constraints,
            n,
            &mut tracker,
        );
        tracker
            .best
            .map(|(partition, lp, rp)| (l, r, partition, lp, rp))
    };

    let pool = build_pool(threads)?;
    let found: Vec<Option<PairBest>> = match &pool {
        Some(pool) => pool.install(|| pairs.par_iter().map(solve).collect()),
        None => pairs.iter().map(solve).collect(),
    };

    let mut out = Vec::new();
    for (l, r, partition, lp, rp) in found.into_iter().flatten() {
        let left_lit = payload_literal(&tables.left.columns[l], &left_spaces[l], &lp);
        let right_lit = payload_literal(&tables.right.columns[r], &right_spaces[r], &rp);
        let red =
            MinedRedescription::build(Query::single(left_lit), Query::single(right_lit), tables)?;
        debug_assert_eq!(
            red.partition, partition,
            "counted partition must match bitsets"
        );
        out.push(red);
    }
    out.sort_by(canonical_cmp);
    for (i, red) in out.iter_mut().enumerate() {
        red.id = i as u64;
    }
    Ok(out)
}

fn payload_literal(col: &AttributeColumn, space: &LitSpace, payload: &LitPayload) -> Literal {
    match (payload, space) {
        (LitPayload::Bool, _) => Literal::boolean(col.name.clone()),
        (LitPayload::Cat(codes), _) => {
            let alphabet = col.alphabet().expect("categorical column");
            Literal::categories(
                col.name.clone(),
                codes.iter().map(|&c| alphabet[c as usize].clone()),
            )
        }
        (LitPayload::Num(lo, hi), LitSpace::Num { bucketing, .. }) => {
            bucketing.range_literal(&col.name, *lo as usize, *hi as usize)
        }
        (LitPayload::Num(..), _) => unreachable!("numeric payload from non-numeric space"),
    }
}

fn best_for_attribute_pair(
    left: &LitSpace,
    right: &LitSpace,
    constraints: &Constraints,
    n: usize,
    tracker: &mut BestTracker,
) {
    match (left, right) {
        (LitSpace::Num { .. }, LitSpace::Num { .. }) => {
            num_num(left, right, constraints, n, tracker)
        }
        (LitSpace::Num { .. }, _) => {
            for (payload, rows, _) in iter_finite(right) {
                num_other(left, rows, payload, constraints, n, false, tracker);
            }
        }
        (_, LitSpace::Num { .. }) => {
            for (payload, rows, _) in iter_finite(left) {
                num_other(right, rows, payload, constraints, n, true, tracker);
            }
        }
        _ => {
            for (lp, l_rows, l_bits) in iter_finite(left) {
                for (rp, _, r_bits) in iter_finite(right) {
                    let e11 = l_bits.intersection_count(r_bits);
                    let partition =
                        partition_from_counts(e11, l_rows.len(), r_bits.count_ones(), n);
                    if constraints.check(&partition, 2).is_ok() {
                        tracker.offer(partition, lp, rp);
                    }
                }
            }
        }
    }
}

/// The Boolean/categorical literals of a space, with rows and supports.
fn iter_finite(space: &LitSpace) -> Vec<(&LitPayload, &[u32], &Bitset)> {
    const BOOL_PAYLOAD: &LitPayload = &LitPayload::Bool;
    match space {
        LitSpace::Bool { rows, bits } => {
            if rows.is_empty() {
                Vec::new()
            } else {
                vec![(BOOL_PAYLOAD, rows.as_slice(), bits)]
            }
        }
        LitSpace::Cat { combos } => combos
            .iter()
            .map(|(payload, rows, bits)| (payload, rows.as_slice(), bits))
            .collect(),
        LitSpace::Num { .. } => unreachable!("numeric space handled separately"),
    }
}

fn partition_from_counts(e11: usize, l_count: usize, r_count: usize, n: usize) -> Partition {
    Partition {
        e11,
        e10: l_count - e11,
        e01: r_count - e11,
        e00: n + e11 - l_count - r_count,
    }
}

/// Numerical × numerical: for each admissible left interval, count its
/// rows into the right attribute's buckets once, then sweep all right
/// intervals off the prefix sums.
fn num_num(
    left: &LitSpace,
    right: &LitSpace,
    constraints: &Constraints,
    n: usize,
    tracker: &mut BestTracker,
) {
    let LitSpace::Num {
        bucketing: bl,
        rows_by_bucket: left_rows,
        ..
    } = left
    else {
        unreachable!()
    };
    let LitSpace::Num {
        bucketing: br,
        assignment: right_assign,
        ..
    } = right
    else {
        unreachable!()
    };
    let kl = bl.bucket_count();
    let kr = br.bucket_count();
    let max_cover = n - constraints.min_out;

    let mut hist = vec![0usize; kr];
    let mut prefix = vec![0usize; kr + 1];
    for lo1 in 0..kl {
        for hi1 in lo1 + 1..=kl {
            let cl = bl.range_count(lo1, hi1);
            if cl > max_cover {
                break;
            }
            if cl < constraints.min_supp {
                continue;
            }
            hist.iter_mut().for_each(|h| *h = 0);
            let (s, e) = bl.range_positions(lo1, hi1);
            for &row in &left_rows[s..e] {
                hist[right_assign[row as usize] as usize] += 1;
            }
            prefix[0] = 0;
            for (i, &h) in hist.iter().enumerate() {
                prefix[i + 1] = prefix[i] + h;
            }
            for lo2 in 0..kr {
                for hi2 in lo2 + 1..=kr {
                    let cr = br.range_count(lo2, hi2);
                    if cr > max_cover {
                        break;
                    }
                    if cr < constraints.min_supp {
                        continue;
                    }
                    let e11 = prefix[hi2] - prefix[lo2];
                    let partition = partition_from_counts(e11, cl, cr, n);
                    if constraints.check(&partition, 2).is_ok() {
                        tracker.offer(
                            partition,
                            &LitPayload::Num(lo1 as u32, hi1 as u32),
                            &LitPayload::Num(lo2 as u32, hi2 as u32),
                        );
                    }
                }
            }
        }
    }
}

/// Numerical attribute against one finite literal: bucket-count the
/// literal's rows, then sweep the numeric side's intervals. `swap` means
/// the numeric attribute sits on the right-hand side.
fn num_other(
    num: &LitSpace,
    other_rows: &[u32],
    other_payload: &LitPayload,
    constraints: &Constraints,
    n: usize,
    swap: bool,
    tracker: &mut BestTracker,
) {
    let LitSpace::Num {
        bucketing,
        assignment,
        ..
    } = num
    else {
        unreachable!()
    };
    let c_other = other_rows.len();
    let max_cover = n - constraints.min_out;
    if c_other < constraints.min_supp || c_other > max_cover {
        return;
    }
    let k = bucketing.bucket_count();
    let mut hist = vec![0usize; k];
    for &row in other_rows {
        hist[assignment[row as usize] as usize] += 1;
    }
    let mut prefix = vec![0usize; k + 1];
    for (i, &h) in hist.iter().enumerate() {
        prefix[i + 1] = prefix[i] + h;
    }
    for lo in 0..k {
        for hi in lo + 1..=k {
            let c_num = bucketing.range_count(lo, hi);
            if c_num > max_cover {
                break;
            }
            if c_num < constraints.min_supp {
                continue;
            }
            let e11 = prefix[hi] - prefix[lo];
            let num_payload = LitPayload::Num(lo as u32, hi as u32);
            let partition = if swap {
                partition_from_counts(e11, c_other, c_num, n)
            } else {
                partition_from_counts(e11, c_num, c_other, n)
            };
            if constraints.check(&partition, 2).is_ok() {
                if swap {
                    tracker.offer(partition, other_payload, &num_payload);
                } else {
                    tracker.offer(partition, &num_payload, other_payload);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{AttributeColumn, DataTable};

    fn constraints(min_supp: usize, min_out: usize) -> Constraints {
        Constraints {
            min_supp,
            min_out,
            min_accuracy: 0.0,
            max_length: 4,
        }
    }

    fn numeric_tables(left: Vec<(&str, Vec<f64>)>, right: Vec<(&str, Vec<f64>)>) -> Tables {
        let lcols = left
            .into_iter()
            .map(|(n, v)| AttributeColumn::numerical(n, v))
            .collect();
        let rcols = right
            .into_iter()
            .map(|(n, v)| AttributeColumn::numerical(n, v))
            .collect();
        Tables::new(
            DataTable::new(Side::Left, lcols).unwrap(),
            DataTable::new(Side::Right, rcols).unwrap(),
        )
        .unwrap()
    }

    fn bool_tables(left: Vec<(&str, Vec<bool>)>, right: Vec<(&str, Vec<bool>)>) -> Tables {
        let to_col = |(n, v): (&str, Vec<bool>)| {
            let bits = Bitset::from_indices(
                v.len(),
                v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
            );
            AttributeColumn::boolean(n, bits)
        };
        Tables::new(
            DataTable::new(Side::Left, left.into_iter().map(to_col).collect()).unwrap(),
            DataTable::new(Side::Right, right.into_iter().map(to_col).collect()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identical_boolean_columns_pair_with_accuracy_one() {
        let pattern: Vec<bool> = (0..60).map(|i| i % 3 == 0).collect();
        let tables = bool_tables(vec![("l0", pattern.clone())], vec![("r0", pattern)]);
        let params = PairMiningParams {
            bands: 8,
            rows: 4,
            seed: 3,
            ..Default::default()
        };
        let found = fier_init_boolean(&tables, &params, &constraints(1, 1)).unwrap();
        assert_eq!(found.redescriptions.len(), 1);
        let red = &found.redescriptions[0];
        assert_eq!(red.accuracy(), 1.0);
        assert_eq!(red.lquery.format(), "[l0]");
        assert_eq!(red.rquery.format(), "[r0]");
        // identical supports match in every band but the pair is emitted once
        assert_eq!(found.candidate_pairs, 1);
    }

    #[test]
    fn disjoint_boolean_columns_fail_verification() {
        let left: Vec<bool> = (0..40).map(|i| i < 20).collect();
        let right: Vec<bool> = (0..40).map(|i| i >= 20).collect();
        let tables = bool_tables(vec![("a", left)], vec![("b", right)]);
        let params = PairMiningParams {
            bands: 20,
            rows: 1,
            seed: 1,
            ..Default::default()
        };
        // with r = 1 the disjoint pair can easily co-bin somewhere; the
        // accuracy floor rejects it at verification
        let c = Constraints {
            min_supp: 1,
            min_out: 1,
            min_accuracy: 0.01,
            max_length: 4,
        };
        let found = fier_init_boolean(&tables, &params, &c).unwrap();
        assert!(found.redescriptions.is_empty());
    }

    #[test]
    fn single_categories_match_equivalent_booleans() {
        let labels: Vec<&str> = (0..50)
            .map(|i| if i % 5 == 0 { "hit" } else { "miss" })
            .collect();
        let bools: Vec<bool> = (0..50).map(|i| i % 5 == 0).collect();
        let cat = AttributeColumn::categorical("c", &labels);
        let boolean = {
            let bits = Bitset::from_indices(
                50,
                bools.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
            );
            AttributeColumn::boolean("b", bits)
        };
        let tables = Tables::new(
            DataTable::new(Side::Left, vec![cat]).unwrap(),
            DataTable::new(Side::Right, vec![boolean]).unwrap(),
        )
        .unwrap();
        let params = PairMiningParams {
            bands: 12,
            rows: 3,
            seed: 9,
            ..Default::default()
        };
        let found = fier_init(&tables, &params, &constraints(1, 1)).unwrap();
        let hit = found
            .redescriptions
            .iter()
            .find(|r| r.lquery.format() == "[c in {hit}]")
            .expect("category literal pairs with the boolean column");
        assert_eq!(hit.accuracy(), 1.0);
    }

    #[test]
    fn categorical_combination_count_is_bounded() {
        // 4 categories, max combo 2: 4 singles + C(4,2) = 10 literals per band
        let labels: Vec<String> = (0..40).map(|i| format!("c{}", i % 4)).collect();
        let cat_rows = {
            let mut rows: Vec<Vec<u32>> = vec![Vec::new(); 4];
            for (i, l) in labels.iter().enumerate() {
                let c: usize = l[1..].parse().unwrap();
                rows[c].push(i as u32);
            }
            rows
        };
        let family = MinhashFamily::generate(1, 4, 40, 5).unwrap();
        let table = family.band(0).precompute(40);
        let mut out = Vec::new();
        let params = PairMiningParams {
            max_cat_combo: 2,
            ..Default::default()
        };
        sign_categorical(
            &cat_rows,
            0,
            Side::Left,
            &table,
            40,
            &params,
            &constraints(1, 0),
            &mut out,
        );
        assert_eq!(out.len(), 4 + 6);

        // combination signatures are merge-mins of their singles
        let single: FxHashMap<Vec<u32>, Signature> = out
            .iter()
            .filter_map(|(sig, key)| match &key.payload {
                LitPayload::Cat(codes) if codes.len() == 1 => Some((codes.clone(), sig.clone())),
                _ => None,
            })
            .collect();
        for (sig, key) in &out {
            if let LitPayload::Cat(codes) = &key.payload {
                if codes.len() == 2 {
                    let merged =
                        merge_min(&single[&vec![codes[0]]], &single[&vec![codes[1]]]).unwrap();
                    assert_eq!(*sig, merged);
                }
            }
        }
    }

    #[test]
    fn identical_numeric_columns_pair_at_full_accuracy() {
        let values: Vec<f64> = (0..80).map(|i| ((i * 37) % 80) as f64).collect();
        let tables = numeric_tables(vec![("x", values.clone())], vec![("y", values)]);
        let params = PairMiningParams {
            bands: 10,
            rows: 4,
            nbuk: 8,
            seed: 2,
            ..Default::default()
        };
        let found = fier_init_numerical(&tables, &params, &constraints(8, 8)).unwrap();
        assert!(!found.redescriptions.is_empty());
        let best = &found.redescriptions[0];
        assert_eq!(
            best.accuracy(),
            1.0,
            "matching intervals on identical columns"
        );
    }

    #[test]
    fn widest_interval_stored_first_without_minout() {
        // minout = 0, minsupp = 1: the first stored interval for the lowest
        // edge covers the full range
        let col = AttributeColumn::numerical("x", (0..20).map(|i| i as f64).collect());
        let bucketing = Bucketing::equal_height(&col, 4).unwrap();
        let ColumnData::Numerical { sorted_rows, .. } = &col.data else {
            unreachable!()
        };
        let family = MinhashFamily::generate(1, 3, 20, 8).unwrap();
        let table = family.band(0).precompute(20);
        let mut out = Vec::new();
        sign_numerical(
            &bucketing,
            sorted_rows,
            0,
            Side::Left,
            &table,
            20,
            &constraints(1, 0),
            &mut out,
        );
        assert_eq!(out[0].1.payload, LitPayload::Num(0, 4));
    }

    #[test]
    fn subinterval_filter_keeps_widest_upper_bound_per_signature() {
        let col = AttributeColumn::numerical("x", (0..30).map(|i| i as f64).collect());
        let bucketing = Bucketing::equal_height(&col, 5).unwrap();
        let ColumnData::Numerical { sorted_rows, .. } = &col.data else {
            unreachable!()
        };
        // r = 1 makes signature collisions across intervals likely, so the
        // filter actually fires
        let family = MinhashFamily::generate(1, 1, 30, 4).unwrap();
        let table = family.band(0).precompute(30);
        let mut out = Vec::new();
        sign_numerical(
            &bucketing,
            sorted_rows,
            0,
            Side::Left,
            &table,
            30,
            &constraints(1, 0),
            &mut out,
        );
        // every stored signature is the interval's own (recomputed directly),
        // and for a repeated signature the upper bound strictly grows
        let mut seen: FxHashMap<Signature, u32> = FxHashMap::default();
        for (sig, key) in &out {
            let LitPayload::Num(lo, hi) = key.payload else {
                unreachable!()
            };
            let (s, e) = bucketing.range_positions(lo as usize, hi as usize);
            let expect = sign_rows(sorted_rows[s..e].iter().map(|&r| r as usize), &table);
            assert_eq!(*sig, expect, "stored signature is the interval's own");
            if let Some(&prev_hi) = seen.get(sig) {
                assert!(hi > prev_hi, "same signature must extend further right");
            }
            seen.insert(sig.clone(), hi);
        }
        // the filter dropped at least one dominated subinterval
        let all_intervals = 5 * (5 + 1) / 2;
        assert!(out.len() < all_intervals);
    }

    #[test]
    fn verify_rejects_violations_and_sorts_by_accuracy() {
        let pattern_a: Vec<bool> = (0..30).map(|i| i < 10).collect();
        let pattern_b: Vec<bool> = (0..30).map(|i| i < 8).collect();
        let tables = bool_tables(
            vec![("a1", pattern_a.clone()), ("a2", pattern_b)],
            vec![("b1", pattern_a), ("b2", vec![true; 30])],
        );
        let cands = vec![
            CandidatePair {
                left: Literal::boolean("a1"),
                right: Literal::boolean("b1"),
                band: 0,
            },
            CandidatePair {
                left: Literal::boolean("a2"),
                right: Literal::boolean("b1"),
                band: 0,
            },
            CandidatePair {
                left: Literal::boolean("a1"),
                right: Literal::boolean("b2"),
                band: 1,
            },
        ];
        let c = constraints(5, 1);
        let verified = verify_candidates(&cands, &tables, &c, 1).unwrap();
        // (a1,b2) violates minout (E00 = 0) and is dropped
        assert_eq!(verified.len(), 2);
        let accs: Vec<f64> = verified.iter().map(|r| r.accuracy()).collect();
        assert!(accs[0] >= accs[1], "sorted by accuracy descending");
        assert_eq!(verified[0].lquery.format(), "[a1]");
        assert_eq!(verified[0].partition.e11, 10);
    }

    #[test]
    fn exhaustive_boolean_pair_is_bitset_jaccard() {
        let a: Vec<bool> = (0..40).map(|i| i % 2 == 0).collect();
        let b: Vec<bool> = (0..40).map(|i| i % 4 == 0).collect();
        let tables = bool_tables(vec![("a", a)], vec![("b", b)]);
        let found = exhaustive_pairs(
            &tables,
            &constraints(1, 1),
            ExhaustiveMode::PreBucketed,
            4,
            3,
            1,
        )
        .unwrap();
        assert_eq!(found.len(), 1);
        // |A∩B| = 10, |A∪B| = 20
        assert!((found[0].accuracy() - 0.5).abs() < 1e-12);
    }

    fn lcg(state: &mut u64) -> f64 {
        *state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((*state >> 33) & 0x7fff_ffff) as f64 / (0x8000_0000u64 as f64)
    }

    #[test]
    fn prebucketed_never_beats_on_the_fly() {
        let mut state = 88u64;
        let n = 60;
        let lx: Vec<f64> = (0..n).map(|_| lcg(&mut state)).collect();
        let ly: Vec<f64> = (0..n).map(|_| lcg(&mut state)).collect();
        let rx: Vec<f64> = lx.iter().map(|v| v + lcg(&mut state) * 0.3).collect();
        let tables = numeric_tables(vec![("lx", lx), ("ly", ly)], vec![("rx", rx)]);
        let c = constraints(6, 6);
        let bucketed = exhaustive_pairs(&tables, &c, ExhaustiveMode::PreBucketed, 6, 3, 1).unwrap();
        let exact = exhaustive_pairs(&tables, &c, ExhaustiveMode::OnTheFly, 6, 3, 1).unwrap();
        assert!(!bucketed.is_empty());
        for b in &bucketed {
            let e = exact
                .iter()
                .find(|e| e.left_attrs == b.left_attrs && e.right_attrs == b.right_attrs)
                .expect("on-the-fly finds at least the bucketed pairs");
            assert!(
                e.partition.cmp_accuracy(&b.partition) != Ordering::Less,
                "bucketed {} beats exact {}",
                b.accuracy(),
                e.accuracy()
            );
        }
    }

    #[test]
    fn mined_pairs_never_beat_the_prebucketed_exhaustive_best() {
        let mut state = 4242u64;
        let n = 90;
        let tables = numeric_tables(
            vec![
                ("l0", (0..n).map(|_| lcg(&mut state)).collect()),
                ("l1", (0..n).map(|_| lcg(&mut state)).collect()),
            ],
            vec![
                ("r0", (0..n).map(|_| lcg(&mut state)).collect()),
                ("r1", (0..n).map(|_| lcg(&mut state)).collect()),
            ],
        );
        let c = constraints(9, 9);
        let params = PairMiningParams {
            bands: 12,
            rows: 3,
            nbuk: 6,
            seed: 77,
            ..Default::default()
        };
        let mined = fier_init(&tables, &params, &c).unwrap();
        let exhaustive =
            exhaustive_pairs(&tables, &c, ExhaustiveMode::PreBucketed, 6, 3, 1).unwrap();
        for red in &mined.redescriptions {
            let best = exhaustive
                .iter()
                .find(|e| e.left_attrs == red.left_attrs && e.right_attrs == red.right_attrs)
                .expect("exhaustive covers every attribute pair the miner found");
            assert!(
                best.partition.cmp_accuracy(&red.partition) != Ordering::Less,
                "dominance violated"
            );
        }
    }

    #[test]
    fn best_per_attribute_pair_keeps_maxima() {
        let values: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let tables = numeric_tables(vec![("x", values.clone())], vec![("y", values)]);
        let params = PairMiningParams {
            bands: 6,
            rows: 2,
            nbuk: 4,
            seed: 5,
            ..Default::default()
        };
        let found = fier_init(&tables, &params, &constraints(4, 4)).unwrap();
        assert!(!found.redescriptions.is_empty());
        let best = best_per_attribute_pair(&found.redescriptions);
        assert_eq!(best.len(), 1, "one attribute pair");
        for red in &found.redescriptions {
            assert!(best[0].partition.cmp_accuracy(&red.partition) != Ordering::Less);
        }
    }
}
