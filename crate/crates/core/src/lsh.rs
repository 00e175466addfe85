//! Minhash and Hamming signature machinery for locality-sensitive hashing.
//!
//! Signatures are banded: `b` bands of `r` values each, and two items are
//! paired when all `r` values agree in at least one band. For supports
//! compared by Jaccard similarity the per-value hash is a minhash; for
//! binary vectors compared by Hamming distance it is the vector's bit at a
//! sampled row index.
//!
//! Minhash uses the affine family `(a·i + c) mod p` with `p` the smallest
//! prime above the universe size rather than true permutations; collision
//! probability still tracks Jaccard similarity closely (covered by a
//! statistical test).

use crate::bitset::Bitset;
use crate::data::Side;
use crate::error::Error;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};

/// An r-tuple of minhash values.
pub type Signature = Vec<u64>;

/// An r-bit Hamming signature, packed little-endian (sample order).
pub type HammingSignature = u64;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn smallest_prime_above(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// One minhash band: `r` affine hash functions over row indices.
#[derive(Debug, Clone)]
pub struct MinhashBand {
    mul: Vec<u64>,
    add: Vec<u64>,
    prime: u64,
}

impl MinhashBand {
    pub fn r(&self) -> usize {
        self.mul.len()
    }

    #[inline]
    pub fn hash(&self, func: usize, row: usize) -> u64 {
        (self.mul[func] * row as u64 + self.add[func]) % self.prime
    }

    /// Row-major table of all hash values: entry `[row * r + func]`.
    /// Trades memory for the per-row min-scan in the pair miner.
    pub fn precompute(&self, universe: usize) -> MinhashTable {
        let r = self.r();
        let mut values = vec![0u32; universe * r];
        for row in 0..universe {
            for func in 0..r {
                values[row * r + func] = self.hash(func, row) as u32;
            }
        }
        MinhashTable { r, values }
    }
}

/// Precomputed hash values of one band over the whole universe.
pub struct MinhashTable {
    r: usize,
    values: Vec<u32>,
}

impl MinhashTable {
    #[inline]
    pub fn row(&self, row: usize) -> &[u32] {
        &self.values[row * self.r..(row + 1) * self.r]
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

/// A full minhash family: `b` bands of `r` hash functions, reproducible
/// from `(seed, b, r, universe)`.
#[derive(Debug, Clone)]
pub struct MinhashFamily {
    bands: Vec<MinhashBand>,
    prime: u64,
    universe: usize,
}

impl MinhashFamily {
    pub fn generate(b: usize, r: usize, universe: usize, seed: u64) -> Result<Self, Error> {
        if b == 0 || r == 0 {
            return Err(Error::InvalidParams(
                "bands and rows must be positive".into(),
            ));
        }
        if universe == 0 || universe as u64 >= u32::MAX as u64 - 64 {
            return Err(Error::InvalidParams(format!(
                "universe size {universe} out of range"
            )));
        }
        let prime = smallest_prime_above(universe as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bands = (0..b)
            .map(|_| {
                let mul = (0..r).map(|_| rng.gen_range(1..prime)).collect();
                let add = (0..r).map(|_| rng.gen_range(0..prime)).collect();
                MinhashBand { mul, add, prime }
            })
            .collect();
        Ok(MinhashFamily {
            bands,
            prime,
            universe,
        })
    }

    pub fn bands(&self) -> &[MinhashBand] {
        &self.bands
    }

    pub fn band(&self, i: usize) -> &MinhashBand {
        &self.bands[i]
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn universe(&self) -> usize {
        self.universe
    }
}

/// Minhash signature of a non-empty support under one band: value `j` is
/// the minimum of hash `j` over the support's set rows.
pub fn minhash_signature(support: &Bitset, band: &MinhashBand) -> Result<Signature, Error> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut sig = vec![u64::MAX; band.r()];
    for row in support.iter_ones() {
        for (func, slot) in sig.iter_mut().enumerate() {
            let h = band.hash(func, row);
            if h < *slot {
                *slot = h;
            }
        }
    }
    Ok(sig)
}

/// Element-wise minimum of two signatures. Because the minimum over a
/// union is the minimum of the minima, `merge_min(sig(A), sig(B))` equals
/// `sig(A ∪ B)` exactly.
pub fn merge_min(a: &Signature, b: &Signature) -> Result<Signature, Error> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| x.min(y)).collect())
}

/// Sampled row indices for the Hamming bands; uniform with replacement.
/// `r` is capped at 64 so a band signature packs into one word.
#[derive(Debug, Clone)]
pub struct HammingFamily {
    bands: Vec<Vec<u32>>,
}

impl HammingFamily {
    pub fn generate(b: usize, r: usize, universe: usize, seed: u64) -> Result<Self, Error> {
        if b == 0 || r == 0 {
            return Err(Error::InvalidParams(
                "bands and rows must be positive".into(),
            ));
        }
        if r > 64 {
            return Err(Error::InvalidParams(format!(
                "hamming rows per band is {r}, the maximum supported is 64"
            )));
        }
        if universe == 0 {
            return Err(Error::InvalidParams("universe must be non-empty".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bands = (0..b)
            .map(|_| (0..r).map(|_| rng.gen_range(0..universe as u32)).collect())
            .collect();
        Ok(HammingFamily { bands })
    }

    pub fn b(&self) -> usize {
        self.bands.len()
    }

    pub fn band_indices(&self, band: usize) -> &[u32] {
        &self.bands[band]
    }
}

/// The vector's bits at the band's sampled indices, in sampling order.
pub fn hamming_signature(vector: &Bitset, indices: &[u32]) -> HammingSignature {
    let mut sig = 0u64;
    for (j, &idx) in indices.iter().enumerate() {
        if vector.get(idx as usize) {
            sig |= 1 << j;
        }
    }
    sig
}

/// S-curve threshold `(1/b)^(1/r)`: the similarity at which the banded
/// matching probability crosses roughly one half.
pub fn lsh_threshold(b: usize, r: usize) -> f64 {
    (1.0 / b as f64).powf(1.0 / r as f64)
}

/// Probability `1 - (1 - p^r)^b` that two items at similarity `p` share
/// all `r` values in at least one of `b` bands.
pub fn match_probability(p: f64, b: usize, r: usize) -> f64 {
    let p = p.clamp(0.0, 1.0);
    (1.0 - (1.0 - p.powi(r as i32)).powi(b as i32)).clamp(0.0, 1.0)
}

/// Literals binned by exact signature equality, with side tags.
///
/// Keys are the full signature tuples, so equal hashes of distinct
/// signatures can never merge bins.
#[derive(Debug, Default)]
pub struct SignatureBins {
    bins: FxHashMap<Signature, Bin>,
}

#[derive(Debug, Default)]
struct Bin {
    left: Vec<u32>,
    right: Vec<u32>,
}

impl SignatureBins {
    pub fn new() -> Self {
        SignatureBins::default()
    }

    pub fn clear(&mut self) {
        self.bins.clear();
    }

    /// Insert a literal id under a signature; a given id is stored at most
    /// once per bin.
    pub fn insert(&mut self, sig: &Signature, literal: u32, side: Side) {
        let bin = self.bins.entry(sig.clone()).or_default();
        let ids = match side {
            Side::Left => &mut bin.left,
            Side::Right => &mut bin.right,
        };
        if !ids.contains(&literal) {
            ids.push(literal);
        }
    }

    /// Whether any left-side literal occupies the signature's bin. Used to
    /// discard right-side literals that could never pair.
    pub fn has_left(&self, sig: &Signature) -> bool {
        self.bins.get(sig).is_some_and(|bin| !bin.left.is_empty())
    }

    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    /// All cross-side literal pairs that share a bin, each unordered pair
    /// emitted at most once per call, in sorted order.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let mut seen = FxHashSet::default();
        let mut out = Vec::new();
        for bin in self.bins.values() {
            for &l in &bin.left {
                for &r in &bin.right {
                    if seen.insert((l, r)) {
                        out.push((l, r));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
