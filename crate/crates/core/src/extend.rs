//! Greedy extension of initial pairs.
//!
//! Candidate columns are found with Hamming-signature LSH: every column is
//! signed once up front (numerical columns at several doubling bucket
//! counts), each redescription derives four target vectors (side ×
//! connective) with don't-care rows filled 0 for AND and 1 for OR, and a
//! column whose signature matches a target's in any band becomes a
//! candidate. The actual extension literal is then computed exactly with
//! the cut-point method over the status-changeable entities, and the
//! best strictly-improving extension is pushed back onto an
//! accuracy-keyed priority queue.
//!
//! The exhaustive variant runs the same loop with every column as a
//! candidate; it is the greedy baseline the LSH extender is compared to.

use crate::bitset::Bitset;
use crate::data::{Bucketing, ColumnData, Side, Tables};
use crate::error::Error;
use crate::lsh::{hamming_signature, HammingFamily, HammingSignature};
use crate::pairs::{build_pool, canonical_cmp, MinedRedescription};
use crate::query::{Connective, Constraints, Literal, Partition};
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Parameters of the extension phase.
#[derive(Debug, Clone)]
pub struct ExtensionParams {
    /// Hamming bands.
    pub bands: usize,
    /// Sampled indices per band (at most 64).
    pub rows: usize,
    /// Bucket counts for numerical columns, strictly increasing; every
    /// level is signed so no single discretisation has to be right.
    pub schedule: Vec<usize>,
    pub seed: u64,
    /// Extensions kept per step; 1 reproduces plain greedy search.
    pub beam: usize,
    pub threads: usize,
}

impl Default for ExtensionParams {
    fn default() -> Self {
        ExtensionParams {
            bands: 40,
            rows: 10,
            schedule: vec![8, 16, 32, 64],
            seed: 0,
            beam: 1,
            threads: 1,
        }
    }
}

/// Hamming signatures for every extendable literal unit: Boolean columns,
/// single categories, and each bucket of each schedule level of numerical
/// columns. Intervals themselves are never stored; they are recomputed by
/// the cut-point search when a column matches.
pub struct ExtensionStore {
    family: HammingFamily,
    units: Vec<UnitMeta>,
    /// Band-major signatures: `sigs[band][unit]`.
    sigs: Vec<Vec<HammingSignature>>,
}

#[derive(Debug, Clone, Copy)]
struct UnitMeta {
    side: Side,
    col: u32,
}

impl ExtensionStore {
    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn units_for(&self, side: Side, col: u32) -> usize {
        self.units
            .iter()
            .filter(|u| u.side == side && u.col == col)
            .count()
    }

    pub fn bands(&self) -> usize {
        self.sigs.len()
    }
}

/// Sign all columns of both tables once.
pub fn build_extension_signatures(
    tables: &Tables,
    params: &ExtensionParams,
) -> Result<ExtensionStore, Error> {
    if params.schedule.is_empty() {
        return Err(Error::InvalidParams(
            "bucket schedule must be non-empty".into(),
        ));
    }
    if !params.schedule.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParams(
            "bucket schedule must be strictly increasing".into(),
        ));
    }
    if params.beam == 0 {
        return Err(Error::InvalidParams("beam must be at least 1".into()));
    }
    let n = tables.rows();
    let family = HammingFamily::generate(params.bands, params.rows, n, params.seed)?;

    let mut units: Vec<UnitMeta> = Vec::new();
    let mut sigs: Vec<Vec<HammingSignature>> = vec![Vec::new(); params.bands];

    for side in [Side::Left, Side::Right] {
        let table = tables.side(side);
        for (col_idx, col) in table.columns.iter().enumerate() {
            let meta = UnitMeta {
                side,
                col: col_idx as u32,
            };
            match &col.data {
                ColumnData::Boolean(bits) => {
                    units.push(meta);
                    for (band, band_sigs) in sigs.iter_mut().enumerate() {
                        band_sigs.push(hamming_signature(bits, family.band_indices(band)));
                    }
                }
                ColumnData::Categorical { codes, alphabet } => {
                    units.extend(std::iter::repeat_n(meta, alphabet.len()));
                    for (band, band_sigs) in sigs.iter_mut().enumerate() {
                        let start = band_sigs.len();
                        band_sigs.resize(start + alphabet.len(), 0);
                        for (j, &idx) in family.band_indices(band).iter().enumerate() {
                            let cat = codes[idx as usize] as usize;
                            band_sigs[start + cat] |= 1 << j;
                        }
                    }
                }
                ColumnData::Numerical { .. } => {
                    for &level in &params.schedule {
                        let bucketing = Bucketing::equal_height(col, level)?;
                        let assignment = bucketing.row_assignment(col);
                        let k = bucketing.bucket_count();
                        units.extend(std::iter::repeat_n(meta, k));
                        for (band, band_sigs) in sigs.iter_mut().enumerate() {
                            let start = band_sigs.len();
                            band_sigs.resize(start + k, 0);
                            for (j, &idx) in family.band_indices(band).iter().enumerate() {
                                let bucket = assignment[idx as usize] as usize;
                                band_sigs[start + bucket] |= 1 << j;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(ExtensionStore {
        family,
        units,
        sigs,
    })
}

/// The ideal support of an extension literal, with don't-care rows filled
/// by the connective's identity: 0 for AND (intersections ignore them),
/// 1 for OR (unions ignore them).
#[derive(Debug, Clone)]
pub struct TargetVector {
    pub side: Side,
    pub op: Connective,
    pub bits: Bitset,
}

/// Targets for the four (side, connective) extension slots.
///
/// For AND the literal should keep E11 (bit 1) and drop the extended
/// side's exclusive rows (bit 0); for OR it should gain the opposite
/// side's exclusive rows (bit 1) and avoid E00 (bit 0). After don't-care
/// fill the AND target is exactly E11 and the OR target the support
/// union, on either side.
pub fn compute_target_vectors(red: &MinedRedescription) -> [TargetVector; 4] {
    let and_bits = red.lsupp.and(&red.rsupp);
    let or_bits = red.lsupp.or(&red.rsupp);
    [
        TargetVector {
            side: Side::Left,
            op: Connective::And,
            bits: and_bits.clone(),
        },
        TargetVector {
            side: Side::Left,
            op: Connective::Or,
            bits: or_bits.clone(),
        },
        TargetVector {
            side: Side::Right,
            op: Connective::And,
            bits: and_bits,
        },
        TargetVector {
            side: Side::Right,
            op: Connective::Or,
            bits: or_bits,
        },
    ]
}

/// A column that matched a target vector in some band. One candidate per
/// (column, side, operator); only the first matching band is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionCandidate {
    pub col: u32,
    pub side: Side,
    pub op: Connective,
    pub first_band: usize,
}

/// Match targets against every stored unit, band by band. A unit whose
/// signature equals the target's in any band yields a candidate for the
/// unit's column on the target's side.
pub fn compute_candidates(
    targets: &[TargetVector],
    store: &ExtensionStore,
) -> Vec<ExtensionCandidate> {
    let mut first: FxHashMap<(Side, u32, Connective), usize> = FxHashMap::default();
    for band in 0..store.bands() {
        let indices = store.family.band_indices(band);
        let target_sigs: Vec<HammingSignature> = targets
            .iter()
            .map(|t| hamming_signature(&t.bits, indices))
            .collect();
        let band_sigs = &store.sigs[band];
        for (unit_idx, unit) in store.units.iter().enumerate() {
            let usig = band_sigs[unit_idx];
            for (t, tsig) in targets.iter().zip(&target_sigs) {
                if t.side == unit.side && usig == *tsig {
                    first.entry((unit.side, unit.col, t.op)).or_insert(band);
                }
            }
        }
    }
    let mut out: Vec<ExtensionCandidate> = first
        .into_iter()
        .map(|((side, col, op), first_band)| ExtensionCandidate {
            col,
            side,
            op,
            first_band,
        })
        .collect();
    out.sort_by_key(|c| (c.side, c.col, c.op == Connective::Or));
    out
}

/// Rational value `num/den` with `den == 0` meaning 0 (the empty-union
/// accuracy convention).
#[derive(Debug, Clone, Copy)]
struct Frac {
    num: u64,
    den: u64,
}

impl Frac {
    fn new(num: u64, den: u64) -> Frac {
        if den == 0 {
            Frac { num: 0, den: 1 }
        } else {
            Frac { num, den }
        }
    }

    fn cmp(&self, other: &Frac) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RangeChoice {
    lo: usize,
    hi: usize, // inclusive group indices
    a: u64,
    b: u64,
}

const QUADRATIC_CUTOFF: usize = 512;

/// Maximise `(alpha + A(range)) / (kappa + B(range))` over non-empty
/// contiguous group ranges subject to `A >= a_min` and `B <= b_max`.
/// Ties prefer smaller B (fewer mismatches), then the lexicographically
/// smallest range. Exact integer arithmetic throughout.
fn best_fractional(
    groups: &[(u64, u64)],
    alpha: u64,
    kappa: u64,
    a_min: u64,
    b_max: u64,
) -> Option<RangeChoice> {
    if groups.is_empty() {
        return None;
    }
    if groups.len() <= QUADRATIC_CUTOFF {
        return quadratic_scan(groups, alpha, kappa, a_min, b_max);
    }
    if let Some(choice) = dinkelbach(groups, alpha, kappa) {
        if choice.a >= a_min && choice.b <= b_max {
            return Some(choice);
        }
    }
    // constrained optimum differs from the unconstrained one; fall back
    // to the exact scan
    quadratic_scan(groups, alpha, kappa, a_min, b_max)
}

fn quadratic_scan(
    groups: &[(u64, u64)],
    alpha: u64,
    kappa: u64,
    a_min: u64,
    b_max: u64,
) -> Option<RangeChoice> {
    let v = groups.len();
    let mut pa = vec![0u64; v + 1];
    let mut pb = vec![0u64; v + 1];
    for (i, &(a, b)) in groups.iter().enumerate() {
        pa[i + 1] = pa[i] + a;
        pb[i + 1] = pb[i] + b;
    }
    let mut best: Option<(Frac, RangeChoice)> = None;
    for lo in 0..v {
        for hi in lo..v {
            let a = pa[hi + 1] - pa[lo];
            let b = pb[hi + 1] - pb[lo];
            if a < a_min || b > b_max {
                continue;
            }
            let val = Frac::new(alpha + a, kappa + b);
            let better = match &best {
                None => true,
                Some((cur, choice)) => match val.cmp(cur) {
                    Ordering::Greater => true,
                    Ordering::Equal => b < choice.b,
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((val, RangeChoice { lo, hi, a, b }));
            }
        }
    }
    best.map(|(_, c)| c)
}

/// Parametric search for the unconstrained maximum: repeatedly take the
/// max-weight range under weights `a*den - b*num` (a Kadane scan that
/// breaks ties toward fewer mismatches and smaller ranges) and tighten
/// the ratio until it stops improving.
fn dinkelbach(groups: &[(u64, u64)], alpha: u64, kappa: u64) -> Option<RangeChoice> {
    let a_tot: u64 = groups.iter().map(|g| g.0).sum();
    let b_tot: u64 = groups.iter().map(|g| g.1).sum();
    let mut lambda = Frac::new(alpha + a_tot, kappa + b_tot);
    let mut result = RangeChoice {
        lo: 0,
        hi: groups.len() - 1,
        a: a_tot,
        b: b_tot,
    };
    for _ in 0..128 {
        let choice = kadane_best(groups, lambda);
        let val = Frac::new(alpha + choice.a, kappa + choice.b);
        match val.cmp(&lambda) {
            Ordering::Greater => {
                lambda = val;
                result = choice;
            }
            // converged: the final Kadane pass already applied the
            // tie-breaks at the optimal ratio
            _ => return Some(choice),
        }
    }
    let _ = result;
    None // did not converge; caller falls back to the exact scan
}

fn kadane_best(groups: &[(u64, u64)], lambda: Frac) -> RangeChoice {
    #[derive(Clone, Copy)]
    struct Run {
        w: i128,
        b: u64,
        a: u64,
        start: usize,
    }
    // (w desc, b asc, start asc)
    fn run_better(x: &Run, y: &Run) -> bool {
        match x.w.cmp(&y.w) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match x.b.cmp(&y.b) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => x.start < y.start,
            },
        }
    }

    let mut best: Option<(Run, usize)> = None;
    let mut cur: Option<Run> = None;
    for (k, &(a, b)) in groups.iter().enumerate() {
        let w = a as i128 * lambda.den as i128 - b as i128 * lambda.num as i128;
        let fresh = Run { w, b, a, start: k };
        let extended = cur.map(|c| Run {
            w: c.w + w,
            b: c.b + b,
            a: c.a + a,
            start: c.start,
        });
        let chosen = match extended {
            Some(ext) if run_better(&ext, &fresh) => ext,
            _ => fresh,
        };
        cur = Some(chosen);
        let replace = match &best {
            None => true,
            Some((b_run, _)) => run_better(&chosen, b_run),
        };
        if replace {
            best = Some((chosen, k));
        }
    }
    let (run, end) = best.expect("groups are non-empty");
    RangeChoice {
        lo: run.start,
        hi: end,
        a: run.a,
        b: run.b,
    }
}

/// Per-(side, op) bookkeeping for one extension evaluation.
struct ExtensionFrame {
    alpha: u64,
    kappa: u64,
    a_min: u64,
    b_max: u64,
    /// Rows whose coverage helps (for AND: E11; for OR: the opposite
    /// side's exclusive rows).
    gain_rows: Bitset,
    /// Rows whose coverage hurts (for AND: the extended side's exclusive
    /// rows; for OR: E00).
    loss_rows: Bitset,
}

fn extension_frame(
    red: &MinedRedescription,
    side: Side,
    op: Connective,
    constraints: &Constraints,
) -> Option<ExtensionFrame> {
    let p = &red.partition;
    let (side_supp, opp_supp) = match side {
        Side::Left => (&red.lsupp, &red.rsupp),
        Side::Right => (&red.rsupp, &red.lsupp),
    };
    let side_only = match side {
        Side::Left => p.e10,
        Side::Right => p.e01,
    };
    let opp_only = match side {
        Side::Left => p.e01,
        Side::Right => p.e10,
    };
    match op {
        Connective::And => {
            let budget = (p.e00 + side_only) as i64 - constraints.min_out as i64;
            if budget < 0 {
                return None;
            }
            Some(ExtensionFrame {
                alpha: 0,
                kappa: (p.e11 + opp_only) as u64,
                a_min: constraints.min_supp as u64,
                b_max: budget as u64,
                gain_rows: side_supp.and(opp_supp),
                loss_rows: side_supp.and_not(opp_supp),
            })
        }
        Connective::Or => {
            let budget = p.e00 as i64 - constraints.min_out as i64;
            if budget < 0 {
                return None;
            }
            Some(ExtensionFrame {
                alpha: p.e11 as u64,
                kappa: (p.e11 + p.e10 + p.e01) as u64,
                a_min: constraints.min_supp.saturating_sub(p.e11) as u64,
                b_max: budget as u64,
                gain_rows: opp_supp.and_not(side_supp),
                loss_rows: side_supp.or(opp_supp).not(),
            })
        }
    }
}

/// Partition of the extended redescription from the counts of gained and
/// lost rows covered by the literal.
fn extended_partition(p: &Partition, side: Side, op: Connective, a: usize, b: usize) -> Partition {
    match (op, side) {
        (Connective::And, Side::Left) => Partition {
            e11: a,
            e10: b,
            e01: p.e01 + p.e11 - a,
            e00: p.e00 + p.e10 - b,
        },
        (Connective::And, Side::Right) => Partition {
            e11: a,
            e01: b,
            e10: p.e10 + p.e11 - a,
            e00: p.e00 + p.e01 - b,
        },
        (Connective::Or, Side::Left) => Partition {
            e11: p.e11 + a,
            e10: p.e10 + b,
            e01: p.e01 - a,
            e00: p.e00 - b,
        },
        (Connective::Or, Side::Right) => Partition {
            e11: p.e11 + a,
            e01: p.e01 + b,
            e10: p.e10 - a,
            e00: p.e00 - b,
        },
    }
}

/// Best literal on one column for one (side, operator) slot, or None when
/// no literal strictly improves accuracy within the constraints.
///
/// Boolean columns offer the column itself, categorical columns each
/// single category, numerical columns every interval with endpoints at
/// observed values; the interval search scans cut points over only the
/// status-changeable entities.
pub fn best_literal_extension(
    red: &MinedRedescription,
    col_idx: u32,
    side: Side,
    op: Connective,
    tables: &Tables,
    constraints: &Constraints,
) -> Result<Option<MinedRedescription>, Error> {
    if red.literal_count() + 1 > constraints.max_length {
        return Ok(None);
    }
    let Some(frame) = extension_frame(red, side, op, constraints) else {
        return Ok(None);
    };
    let table = tables.side(side);
    let col = table
        .columns
        .get(col_idx as usize)
        .ok_or_else(|| Error::UnknownAttribute(format!("column #{col_idx}")))?;

    // (partition, mismatch-count, literal) candidates per column kind
    let mut options: Vec<(Partition, Literal)> = Vec::new();
    match &col.data {
        ColumnData::Boolean(bits) => {
            let a = frame.gain_rows.intersection_count(bits);
            let b = frame.loss_rows.intersection_count(bits);
            options.push((
                extended_partition(&red.partition, side, op, a, b),
                Literal::boolean(col.name.clone()),
            ));
        }
        ColumnData::Categorical { alphabet, .. } => {
            for (code, label) in alphabet.iter().enumerate() {
                let bits = col.category_support(code as u32).expect("categorical");
                if bits.is_empty() {
                    continue;
                }
                let a = frame.gain_rows.intersection_count(&bits);
                let b = frame.loss_rows.intersection_count(&bits);
                options.push((
                    extended_partition(&red.partition, side, op, a, b),
                    Literal::categories(col.name.clone(), [label.clone()]),
                ));
            }
        }
        ColumnData::Numerical {
            values,
            sorted_rows,
        } => {
            // group the changeable rows by value, in value order
            let mut groups: Vec<(u64, u64)> = Vec::new();
            let mut bounds: Vec<f64> = Vec::new();
            for &row in sorted_rows {
                let row = row as usize;
                let in_gain = frame.gain_rows.get(row);
                let in_loss = frame.loss_rows.get(row);
                if !in_gain && !in_loss {
                    continue;
                }
                let v = values[row];
                if bounds.last() != Some(&v) {
                    bounds.push(v);
                    groups.push((0, 0));
                }
                let g = groups.last_mut().unwrap();
                if in_gain {
                    g.0 += 1;
                } else {
                    g.1 += 1;
                }
            }
            if let Some(choice) =
                best_fractional(&groups, frame.alpha, frame.kappa, frame.a_min, frame.b_max)
            {
                let lit = Literal::interval(
                    col.name.clone(),
                    Some(bounds[choice.lo]),
                    Some(bounds[choice.hi]),
                );
                options.push((
                    extended_partition(
                        &red.partition,
                        side,
                        op,
                        choice.a as usize,
                        choice.b as usize,
                    ),
                    lit,
                ));
            }
        }
    }

    // best admissible option: accuracy first, then fewest mismatches;
    // enumeration order settles remaining ties
    let mut best: Option<(Partition, Literal)> = None;
    for (partition, lit) in options {
        if partition.cmp_accuracy(&red.partition) != Ordering::Greater {
            continue;
        }
        if constraints
            .check(&partition, red.literal_count() + 1)
            .is_err()
        {
            continue;
        }
        let better = match &best {
            None => true,
            Some((cur, _)) => match partition.cmp_accuracy(cur) {
                Ordering::Greater => true,
                Ordering::Equal => partition.e10 + partition.e01 < cur.e10 + cur.e01,
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((partition, lit));
        }
    }
    let Some((predicted, lit)) = best else {
        return Ok(None);
    };

    // materialise the extension and double-check the incremental counts
    let lit_supp = crate::data::literal_support(&lit, table)?;
    let (lquery, rquery, lsupp, rsupp) = match side {
        Side::Left => {
            let q = red.lquery.extended(op, lit);
            let s = apply(&red.lsupp, op, &lit_supp);
            (q, red.rquery.clone(), s, red.rsupp.clone())
        }
        Side::Right => {
            let q = red.rquery.extended(op, lit);
            let s = apply(&red.rsupp, op, &lit_supp);
            (red.lquery.clone(), q, red.lsupp.clone(), s)
        }
    };
    let ext = MinedRedescription::from_parts(lquery, rquery, lsupp, rsupp, tables)?;
    debug_assert_eq!(ext.partition, predicted, "incremental partition must match");
    Ok(Some(ext))
}

fn apply(supp: &Bitset, op: Connective, lit: &Bitset) -> Bitset {
    match op {
        Connective::And => supp.and(lit),
        Connective::Or => supp.or(lit),
    }
}

/// Outcome of an extension run.
#[derive(Debug)]
pub struct ExtensionOutcome {
    /// Final redescriptions in canonical order: every accepted extension
    /// step plus unextendable inputs, deduplicated by query pair.
    pub results: Vec<MinedRedescription>,
    /// Number of accepted extension steps.
    pub steps: usize,
}

struct QueueEntry {
    red: MinedRedescription,
    seq: u64,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for QueueEntry {}
impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap: highest accuracy first, insertion order on ties
        self.red
            .partition
            .cmp_accuracy(&other.red.partition)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Extend initial pairs using LSH candidate matching.
pub fn fier_ext(
    initial: Vec<MinedRedescription>,
    store: &ExtensionStore,
    tables: &Tables,
    constraints: &Constraints,
    params: &ExtensionParams,
) -> Result<ExtensionOutcome, Error> {
    extend_loop(
        initial,
        tables,
        constraints,
        params.beam,
        params.threads,
        |red| {
            let targets = compute_target_vectors(red);
            compute_candidates(&targets, store)
        },
    )
}

/// Extend initial pairs trying every column on both sides with both
/// connectives; the greedy exhaustive baseline.
pub fn exhaustive_extend(
    initial: Vec<MinedRedescription>,
    tables: &Tables,
    constraints: &Constraints,
    beam: usize,
    threads: usize,
) -> Result<ExtensionOutcome, Error> {
    let mut all: Vec<ExtensionCandidate> = Vec::new();
    for side in [Side::Left, Side::Right] {
        for col in 0..tables.side(side).columns.len() {
            for op in [Connective::And, Connective::Or] {
                all.push(ExtensionCandidate {
                    col: col as u32,
                    side,
                    op,
                    first_band: 0,
                });
            }
        }
    }
    extend_loop(initial, tables, constraints, beam, threads, move |_| {
        all.clone()
    })
}

/// Evaluate one redescription's candidates and return the improving
/// extensions ordered by preference: accuracy, then fewest mismatched
/// entities, then column index, then side, then AND before OR.
pub fn evaluate_candidates(
    red: &MinedRedescription,
    candidates: &[ExtensionCandidate],
    tables: &Tables,
    constraints: &Constraints,
    threads: usize,
) -> Result<Vec<MinedRedescription>, Error> {
    let usable: Vec<&ExtensionCandidate> = candidates
        .iter()
        .filter(|c| {
            let used = match c.side {
                Side::Left => &red.left_attrs,
                Side::Right => &red.right_attrs,
            };
            !used.contains(&c.col)
        })
        .collect();
    type Scored = (u32, Side, Connective, MinedRedescription);
    let eval = |c: &&ExtensionCandidate| {
        best_literal_extension(red, c.col, c.side, c.op, tables, constraints)
            .map(|opt| opt.map(|ext| (c.col, c.side, c.op, ext)))
    };
    let pool = build_pool(threads)?;
    let evals: Result<Vec<Option<Scored>>, Error> = match &pool {
        Some(pool) => pool.install(|| usable.par_iter().map(eval).collect()),
        None => usable.iter().map(eval).collect(),
    };
    let mut improving: Vec<Scored> = evals?.into_iter().flatten().collect();
    improving.sort_by(|x, y| {
        y.3.partition
            .cmp_accuracy(&x.3.partition)
            .then_with(|| {
                (x.3.partition.e10 + x.3.partition.e01)
                    .cmp(&(y.3.partition.e10 + y.3.partition.e01))
            })
            .then_with(|| x.0.cmp(&y.0))
            .then_with(|| x.1.cmp(&y.1))
            .then_with(|| (x.2 == Connective::Or).cmp(&(y.2 == Connective::Or)))
    });
    Ok(improving.into_iter().map(|(_, _, _, ext)| ext).collect())
}

fn extend_loop(
    initial: Vec<MinedRedescription>,
    tables: &Tables,
    constraints: &Constraints,
    beam: usize,
    threads: usize,
    candidates_for: impl Fn(&MinedRedescription) -> Vec<ExtensionCandidate>,
) -> Result<ExtensionOutcome, Error> {
    if beam == 0 {
        return Err(Error::InvalidParams("beam must be at least 1".into()));
    }
    let mut initial = initial;
    initial.sort_by(canonical_cmp);
    let mut next_id = initial.iter().map(|r| r.id + 1).max().unwrap_or(0);

    let mut queue: BinaryHeap<QueueEntry> = BinaryHeap::new();
    let mut seq = 0u64;
    for red in initial {
        queue.push(QueueEntry { red, seq });
        seq += 1;
    }

    let mut results: Vec<MinedRedescription> = Vec::new();
    let mut steps = 0usize;
    while let Some(QueueEntry { red, .. }) = queue.pop() {
        if red.literal_count() >= constraints.max_length {
            results.push(red);
            continue;
        }
        let candidates = candidates_for(&red);
        let improving = evaluate_candidates(&red, &candidates, tables, constraints, threads)?;
        if improving.is_empty() {
            results.push(red);
            continue;
        }
        for mut ext in improving.into_iter().take(beam) {
            ext.id = next_id;
            ext.parent = Some(red.id);
            next_id += 1;
            steps += 1;
            results.push(ext.clone());
            if ext.literal_count() < constraints.max_length {
                queue.push(QueueEntry { red: ext, seq });
                seq += 1;
            }
        }
    }

    // dedup by query pair, keeping the first occurrence
    let mut seen: FxHashSet<(String, String)> = FxHashSet::default();
    results.retain(|r| seen.insert((r.lquery.format(), r.rquery.format())));
    results.sort_by(canonical_cmp);
    Ok(ExtensionOutcome { results, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{AttributeColumn, DataTable};
    use crate::query::Query;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn constraints() -> Constraints {
        Constraints {
            min_supp: 1,
            min_out: 0,
            min_accuracy: 0.0,
            max_length: 6,
        }
    }

    fn bool_col(name: &str, v: &[bool]) -> AttributeColumn {
        AttributeColumn::boolean(
            name,
            Bitset::from_indices(
                v.len(),
                v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
            ),
        )
    }

    fn two_sided(left: Vec<AttributeColumn>, right: Vec<AttributeColumn>) -> Tables {
        Tables::new(
            DataTable::new(Side::Left, left).unwrap(),
            DataTable::new(Side::Right, right).unwrap(),
        )
        .unwrap()
    }

    fn pair(tables: &Tables, l: &str, r: &str) -> MinedRedescription {
        MinedRedescription::build(
            Query::parse(l, &tables.left).unwrap(),
            Query::parse(r, &tables.right).unwrap(),
            tables,
        )
        .unwrap()
    }

    #[test]
    fn store_counts_units_per_schedule_level() {
        let values: Vec<f64> = (0..64).map(|i| i as f64).collect();
        let tables = two_sided(
            vec![AttributeColumn::numerical("x", values.clone())],
            vec![bool_col("flag", &[true; 64])],
        );
        let params = ExtensionParams {
            bands: 3,
            rows: 8,
            schedule: vec![2, 4, 8],
            seed: 1,
            ..Default::default()
        };
        let store = build_extension_signatures(&tables, &params).unwrap();
        assert_eq!(store.units_for(Side::Left, 0), 2 + 4 + 8);
        assert_eq!(store.units_for(Side::Right, 0), 1);
        assert_eq!(store.bands(), 3);
    }

    #[test]
    fn identical_boolean_columns_share_signatures() {
        let v: Vec<bool> = (0..50).map(|i| i % 3 == 0).collect();
        let tables = two_sided(
            vec![bool_col("a", &v), bool_col("b", &v)],
            vec![bool_col("c", &v)],
        );
        let params = ExtensionParams {
            bands: 5,
            rows: 10,
            schedule: vec![2],
            seed: 3,
            ..Default::default()
        };
        let store = build_extension_signatures(&tables, &params).unwrap();
        for band in 0..store.bands() {
            assert_eq!(store.sigs[band][0], store.sigs[band][1]);
            assert_eq!(store.sigs[band][0], store.sigs[band][2]);
        }
    }

    #[test]
    fn finer_buckets_nest_and_signatures_agree_inside() {
        // divisible sizes keep consecutive levels nested; check containment
        // directly and that signatures agree on indices inside the finer
        // bucket
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 64;
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let col = AttributeColumn::numerical("x", values);
        let coarse = Bucketing::equal_height(&col, 4).unwrap();
        let fine = Bucketing::equal_height(&col, 8).unwrap();
        let coarse_assign = coarse.row_assignment(&col);
        let fine_assign = fine.row_assignment(&col);

        // containment: every fine bucket maps into exactly one coarse bucket
        let mut owner: Vec<Option<u32>> = vec![None; fine.bucket_count()];
        for row in 0..n {
            let slot = &mut owner[fine_assign[row] as usize];
            match slot {
                None => *slot = Some(coarse_assign[row]),
                Some(c) => assert_eq!(*c, coarse_assign[row], "fine bucket split across coarse"),
            }
        }

        let family = HammingFamily::generate(6, 12, n, 17).unwrap();
        for (f, slot) in owner.iter().enumerate() {
            let c = slot.unwrap() as usize;
            let fine_bits =
                Bitset::from_indices(n, (0..n).filter(|&row| fine_assign[row] as usize == f));
            let coarse_bits =
                Bitset::from_indices(n, (0..n).filter(|&row| coarse_assign[row] as usize == c));
            for band in 0..family.b() {
                let idx = family.band_indices(band);
                let fs = hamming_signature(&fine_bits, idx);
                let cs = hamming_signature(&coarse_bits, idx);
                for (j, &i) in idx.iter().enumerate() {
                    if fine_bits.get(i as usize) {
                        assert_eq!(fs >> j & 1, cs >> j & 1, "inside the fine bucket");
                    }
                }
            }
        }
    }

    /// Row-wise statement of the fill rule, independent of the bitset
    /// implementation.
    fn target_oracle(p_cell: impl Fn(usize) -> u8, n: usize, side: Side, op: Connective) -> Bitset {
        let mut bits = Bitset::new(n);
        for row in 0..n {
            let cell = p_cell(row); // 3 = E11, 2 = E10, 1 = E01, 0 = E00
            let set = match (side, op) {
                (Side::Right, Connective::And) => match cell {
                    3 => true,  // keep
                    1 => false, // drop
                    _ => false, // don't-care fills 0
                },
                (Side::Right, Connective::Or) => match cell {
                    2 => true,
                    0 => false,
                    _ => true, // don't-care fills 1
                },
                (Side::Left, Connective::And) => match cell {
                    3 => true,
                    2 => false,
                    _ => false,
                },
                (Side::Left, Connective::Or) => match cell {
                    1 => true,
                    0 => false,
                    _ => true,
                },
            };
            if set {
                bits.set(row);
            }
        }
        bits
    }

    #[test]
    fn target_vectors_follow_the_fill_rule() {
        // partition rows: 0 in E11, 1 in E10, 2 in E01, 3 in E00
        let tables = two_sided(
            vec![bool_col("l", &[true, true, false, false])],
            vec![bool_col("r", &[true, false, true, false])],
        );
        let red = pair(&tables, "[l]", "[r]");
        let cell = |row: usize| match row {
            0 => 3,
            1 => 2,
            2 => 1,
            _ => 0,
        };
        let targets = compute_target_vectors(&red);
        for t in &targets {
            let expect = target_oracle(cell, 4, t.side, t.op);
            assert_eq!(t.bits, expect, "{:?} {:?}", t.side, t.op);
        }
        // concrete bit patterns: AND targets are E11, OR targets the union
        let and_bits: Vec<bool> = (0..4).map(|i| targets[0].bits.get(i)).collect();
        let or_bits: Vec<bool> = (0..4).map(|i| targets[1].bits.get(i)).collect();
        assert_eq!(and_bits, vec![true, false, false, false]);
        assert_eq!(or_bits, vec![true, true, true, false]);

        // random partitions against the row-wise oracle
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let n = 40;
            let l: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            let r: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            let tables = two_sided(vec![bool_col("l", &l)], vec![bool_col("r", &r)]);
            let red = pair(&tables, "[l]", "[r]");
            let cell = |row: usize| match (l[row], r[row]) {
                (true, true) => 3,
                (true, false) => 2,
                (false, true) => 1,
                (false, false) => 0,
            };
            for t in compute_target_vectors(&red) {
                assert_eq!(t.bits, target_oracle(cell, n, t.side, t.op));
            }
        }
    }

    #[test]
    fn equal_supports_make_the_and_target_the_support_itself() {
        let v: Vec<bool> = (0..30).map(|i| i % 4 == 0).collect();
        let tables = two_sided(vec![bool_col("l", &v)], vec![bool_col("r", &v)]);
        let red = pair(&tables, "[l]", "[r]");
        let targets = compute_target_vectors(&red);
        assert_eq!(targets[2].bits, red.lsupp, "right-AND target");

        // empty intersection: the AND target is all zeros
        let l: Vec<bool> = (0..30).map(|i| i < 10).collect();
        let r: Vec<bool> = (0..30).map(|i| i >= 20).collect();
        let tables = two_sided(vec![bool_col("l", &l)], vec![bool_col("r", &r)]);
        let red = pair(&tables, "[l]", "[r]");
        let targets = compute_target_vectors(&red);
        assert!(targets[0].bits.is_empty());
    }

    #[test]
    fn matching_column_is_reported_once_with_first_band() {
        let v: Vec<bool> = (0..40).map(|i| i % 2 == 0).collect();
        let w: Vec<bool> = (0..40).map(|_| false).collect();
        let tables = two_sided(
            vec![bool_col("l", &v)],
            vec![bool_col("same", &v), bool_col("zero", &w)],
        );
        let red = pair(&tables, "[l]", "[same]");
        let params = ExtensionParams {
            bands: 6,
            rows: 6,
            schedule: vec![2],
            seed: 5,
            ..Default::default()
        };
        let store = build_extension_signatures(&tables, &params).unwrap();
        let targets = compute_target_vectors(&red);
        let candidates = compute_candidates(&targets, &store);
        // `same` equals the AND target (= the support), so it matches in
        // every band and is reported once with the first band
        let same_and = candidates
            .iter()
            .find(|c| c.side == Side::Right && c.col == 0 && c.op == Connective::And)
            .expect("equal column must match");
        assert_eq!(same_and.first_band, 0);
        let count = candidates
            .iter()
            .filter(|c| c.side == Side::Right && c.col == 0 && c.op == Connective::And)
            .count();
        assert_eq!(count, 1);
    }

    #[test]
    fn candidate_match_rate_tracks_the_s_curve() {
        // a column agreeing with the target on 90% of rows should match
        // with probability about 1-(1-0.9^r)^b
        let n = 500;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let target: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let mut column = target.clone();
        let mut flipped = 0;
        while flipped < n / 10 {
            let i = rng.gen_range(0..n);
            if column[i] == target[i] {
                column[i] = !column[i];
                flipped += 1;
            }
        }
        let target_bits = Bitset::from_indices(
            n,
            target
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i),
        );
        let column_bits = Bitset::from_indices(
            n,
            column
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i),
        );

        let (r, b) = (10, 4);
        let trials = 300;
        let mut hits = 0;
        for seed in 0..trials {
            let family = HammingFamily::generate(b, r, n, 1000 + seed).unwrap();
            let matched = (0..b).any(|band| {
                let idx = family.band_indices(band);
                hamming_signature(&target_bits, idx) == hamming_signature(&column_bits, idx)
            });
            if matched {
                hits += 1;
            }
        }
        let empirical = hits as f64 / trials as f64;
        let expected = 1.0 - (1.0 - 0.9f64.powi(r as i32)).powi(b as i32);
        assert!(
            (empirical - expected).abs() < 0.15,
            "empirical {empirical} vs expected {expected}"
        );
    }

    #[test]
    fn and_extension_shrinks_the_extended_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 60;
        let l: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let r: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let extra: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let tables = two_sided(
            vec![bool_col("l", &l), AttributeColumn::numerical("x", extra)],
            vec![bool_col("r", &r)],
        );
        let red = pair(&tables, "[l]", "[r]");
        if let Some(ext) = best_literal_extension(
            &red,
            1,
            Side::Left,
            Connective::And,
            &tables,
            &constraints(),
        )
        .unwrap()
        {
            assert!(ext.lsupp.is_subset(&red.lsupp));
            assert_eq!(ext.rsupp, red.rsupp);
            assert!(ext.partition.cmp_accuracy(&red.partition) == Ordering::Greater);
        }
    }

    #[test]
    fn extending_with_the_missing_support_reaches_full_accuracy() {
        // rsupp = lsupp minus a chunk; a second right column covering the
        // chunk makes an OR extension perfect
        let n = 50;
        let l: Vec<bool> = (0..n).map(|i| i < 30).collect();
        let r1: Vec<bool> = (0..n).map(|i| i < 20).collect();
        let r2: Vec<bool> = (0..n).map(|i| (20..30).contains(&i)).collect();
        let tables = two_sided(
            vec![bool_col("l", &l)],
            vec![bool_col("r1", &r1), bool_col("r2", &r2)],
        );
        let red = pair(&tables, "[l]", "[r1]");
        let ext = best_literal_extension(
            &red,
            1,
            Side::Right,
            Connective::Or,
            &tables,
            &constraints(),
        )
        .unwrap()
        .expect("completing column must improve");
        assert_eq!(ext.accuracy(), 1.0);
        assert_eq!(ext.rquery.format(), "[r1] | [r2]");
    }

    /// Brute force over every interval with endpoints at observed values,
    /// every single category, or the plain Boolean literal, evaluating the
    /// full extended query from scratch.
    fn brute_force_extension(
        red: &MinedRedescription,
        col_idx: u32,
        side: Side,
        op: Connective,
        tables: &Tables,
        constraints: &Constraints,
    ) -> Option<(Partition, String)> {
        let table = tables.side(side);
        let col = &table.columns[col_idx as usize];
        let mut literals: Vec<Literal> = Vec::new();
        match &col.data {
            ColumnData::Boolean(_) => literals.push(Literal::boolean(col.name.clone())),
            ColumnData::Categorical { alphabet, .. } => {
                for label in alphabet {
                    literals.push(Literal::categories(col.name.clone(), [label.clone()]));
                }
            }
            ColumnData::Numerical { values, .. } => {
                let mut distinct: Vec<f64> = values.clone();
                distinct.sort_by(f64::total_cmp);
                distinct.dedup();
                for i in 0..distinct.len() {
                    for j in i..distinct.len() {
                        literals.push(Literal::interval(
                            col.name.clone(),
                            Some(distinct[i]),
                            Some(distinct[j]),
                        ));
                    }
                }
            }
        }
        let mut best: Option<(Partition, String)> = None;
        for lit in literals {
            let (lq, rq) = match side {
                Side::Left => (red.lquery.extended(op, lit.clone()), red.rquery.clone()),
                Side::Right => (red.lquery.clone(), red.rquery.extended(op, lit.clone())),
            };
            let cand = MinedRedescription::build(lq, rq, tables).unwrap();
            if cand.partition.cmp_accuracy(&red.partition) != Ordering::Greater {
                continue;
            }
            if constraints
                .check(&cand.partition, red.literal_count() + 1)
                .is_err()
            {
                continue;
            }
            let better = match &best {
                None => true,
                Some((cur, _)) => match cand.partition.cmp_accuracy(cur) {
                    Ordering::Greater => true,
                    Ordering::Equal => cand.partition.e10 + cand.partition.e01 < cur.e10 + cur.e01,
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((cand.partition, lit.to_string()));
            }
        }
        best
    }

    #[test]
    fn cut_point_search_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for case in 0..25 {
            let n = 30;
            let l: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let r: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            // few distinct values so ties get exercised
            let x: Vec<f64> = (0..n).map(|_| (rng.gen_range(0..8) as f64) / 4.0).collect();
            let labels: Vec<String> = (0..n)
                .map(|_| format!("c{}", rng.gen_range(0..4)))
                .collect();
            let tables = two_sided(
                vec![bool_col("l", &l)],
                vec![
                    bool_col("r", &r),
                    AttributeColumn::numerical("x", x),
                    AttributeColumn::categorical("c", &labels),
                ],
            );
            let red = pair(&tables, "[l]", "[r]");
            let cons = Constraints {
                min_supp: 2,
                min_out: 2,
                min_accuracy: 0.0,
                max_length: 5,
            };
            for col in [1u32, 2u32] {
                for op in [Connective::And, Connective::Or] {
                    let fast =
                        best_literal_extension(&red, col, Side::Right, op, &tables, &cons).unwrap();
                    let slow = brute_force_extension(&red, col, Side::Right, op, &tables, &cons);
                    match (&fast, &slow) {
                        (None, None) => {}
                        (Some(f), Some((partition, _))) => {
                            assert_eq!(
                                f.partition, *partition,
                                "case {case} col {col} {op:?}: partitions differ"
                            );
                        }
                        other => panic!("case {case} col {col} {op:?}: {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn fractional_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let v = rng.gen_range(1..40);
            let groups: Vec<(u64, u64)> = (0..v)
                .map(|_| (rng.gen_range(0..4), rng.gen_range(0..4)))
                .collect();
            let alpha = rng.gen_range(0..10);
            let kappa = alpha + rng.gen_range(0..20);
            let quad = quadratic_scan(&groups, alpha, kappa, 0, u64::MAX);
            let dink = dinkelbach(&groups, alpha, kappa);
            match (quad, dink) {
                (Some(q), Some(d)) => {
                    let qv = Frac::new(alpha + q.a, kappa + q.b);
                    let dv = Frac::new(alpha + d.a, kappa + d.b);
                    assert_eq!(qv.cmp(&dv), Ordering::Equal, "values differ");
                    assert_eq!(q.b, d.b, "mismatch tie-break differs");
                    assert_eq!((q.lo, q.hi), (d.lo, d.hi), "range tie-break differs");
                }
                other => panic!("paths disagree: {other:?}"),
            }
        }
    }

    #[test]
    fn perfect_pairs_come_back_unchanged() {
        let v: Vec<bool> = (0..40).map(|i| i % 2 == 0).collect();
        let noise: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37) % 1.0).collect();
        let tables = two_sided(
            vec![
                bool_col("l", &v),
                AttributeColumn::numerical("lx", noise.clone()),
            ],
            vec![bool_col("r", &v), AttributeColumn::numerical("rx", noise)],
        );
        let red = pair(&tables, "[l]", "[r]");
        assert_eq!(red.accuracy(), 1.0);
        let params = ExtensionParams {
            bands: 4,
            rows: 8,
            schedule: vec![2, 4],
            seed: 8,
            ..Default::default()
        };
        let store = build_extension_signatures(&tables, &params).unwrap();
        let outcome =
            fier_ext(vec![red.clone()], &store, &tables, &constraints(), &params).unwrap();
        assert_eq!(outcome.steps, 0);
        assert_eq!(outcome.results.len(), 1);
        assert_eq!(outcome.results[0].lquery, red.lquery);
    }

    #[test]
    fn extension_count_is_bounded_by_length_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let n = 80;
        let cols = |prefix: &str, rng: &mut ChaCha8Rng| -> Vec<AttributeColumn> {
            (0..4)
                .map(|i| {
                    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                    AttributeColumn::numerical(format!("{prefix}{i}"), v)
                })
                .collect()
        };
        let tables = two_sided(cols("l", &mut rng), cols("r", &mut rng));
        let max_length = 4;
        let cons = Constraints {
            min_supp: 4,
            min_out: 4,
            min_accuracy: 0.0,
            max_length,
        };
        let initial = crate::pairs::exhaustive_pairs(
            &tables,
            &cons,
            crate::pairs::ExhaustiveMode::PreBucketed,
            4,
            3,
            1,
        )
        .unwrap();
        let count = initial.len();
        let outcome = exhaustive_extend(initial, &tables, &cons, 1, 1).unwrap();
        assert!(outcome.steps <= count * (max_length - 2));
        // strict improvement along every chain
        let by_id: FxHashMap<u64, &MinedRedescription> =
            outcome.results.iter().map(|r| (r.id, r)).collect();
        for red in &outcome.results {
            if let Some(parent_id) = red.parent {
                if let Some(parent) = by_id.get(&parent_id) {
                    assert!(red.partition.cmp_accuracy(&parent.partition) == Ordering::Greater);
                }
            }
        }
    }

    #[test]
    fn lsh_one_step_never_beats_exhaustive_one_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 70;
        let mk = |prefix: &str, rng: &mut ChaCha8Rng| -> Vec<AttributeColumn> {
            (0..3)
                .map(|i| {
                    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                    AttributeColumn::numerical(format!("{prefix}{i}"), v)
                })
                .collect()
        };
        let tables = two_sided(mk("l", &mut rng), mk("r", &mut rng));
        let cons = Constraints {
            min_supp: 5,
            min_out: 5,
            min_accuracy: 0.0,
            max_length: 4,
        };
        let initial = crate::pairs::exhaustive_pairs(
            &tables,
            &cons,
            crate::pairs::ExhaustiveMode::PreBucketed,
            5,
            3,
            1,
        )
        .unwrap();
        let params = ExtensionParams {
            bands: 6,
            rows: 8,
            schedule: vec![4, 8],
            seed: 11,
            ..Default::default()
        };
        let store = build_extension_signatures(&tables, &params).unwrap();
        let all: Vec<ExtensionCandidate> = {
            let mut v = Vec::new();
            for side in [Side::Left, Side::Right] {
                for col in 0..3 {
                    for op in [Connective::And, Connective::Or] {
                        v.push(ExtensionCandidate {
                            col,
                            side,
                            op,
                            first_band: 0,
                        });
                    }
                }
            }
            v
        };
        for red in &initial {
            let targets = compute_target_vectors(red);
            let lsh_cands = compute_candidates(&targets, &store);
            let lsh_best = evaluate_candidates(red, &lsh_cands, &tables, &cons, 1).unwrap();
            let full_best = evaluate_candidates(red, &all, &tables, &cons, 1).unwrap();
            if let Some(l) = lsh_best.first() {
                let f = full_best.first().expect("superset cannot be empty");
                assert!(
                    f.partition.cmp_accuracy(&l.partition) != Ordering::Less,
                    "candidate containment violated"
                );
            }
        }
    }

    #[test]
    fn max_length_input_is_returned_unchanged() {
        let v: Vec<bool> = (0..20).map(|i| i < 12).collect();
        let w: Vec<bool> = (0..20).map(|i| i < 10).collect();
        let tables = two_sided(
            vec![bool_col("l1", &v), bool_col("l2", &w)],
            vec![bool_col("r1", &w), bool_col("r2", &v)],
        );
        let red = pair(&tables, "[l1] & [l2]", "[r1] | [r2]");
        let cons = Constraints {
            min_supp: 1,
            min_out: 0,
            min_accuracy: 0.0,
            max_length: 4,
        };
        let outcome = exhaustive_extend(vec![red.clone()], &tables, &cons, 1, 1).unwrap();
        assert_eq!(outcome.steps, 0);
        assert_eq!(outcome.results.len(), 1);
        assert_eq!(outcome.results[0].literal_count(), 4);
    }
}
