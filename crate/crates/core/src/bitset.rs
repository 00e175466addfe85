//! Fixed-width bit vectors over the entity universe.
//!
//! A `Bitset` is the support of a literal or query: bit `i` is set iff
//! entity `i` satisfies it. The popcount is cached so cardinality checks
//! against support thresholds are free.

use crate::error::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
    ones: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
            ones: 0,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut bits = Bitset::new(len);
        for i in indices {
            bits.set(i);
        }
        bits
    }

    pub fn full(len: usize) -> Self {
        let mut bits = Bitset::new(len);
        for w in bits.words.iter_mut() {
            *w = u64::MAX;
        }
        bits.mask_tail();
        bits.ones = len;
        bits
    }

    /// Number of bits (the universe size), not the number set.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.ones == 0
    }

    /// Cached popcount.
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / WORD_BITS];
        let mask = 1u64 << (i % WORD_BITS);
        if *w & mask == 0 {
            *w |= mask;
            self.ones += 1;
        }
    }

    fn mask_tail(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    fn check_width(&self, other: &Bitset) -> Result<(), Error> {
        if self.len != other.len {
            return Err(Error::WidthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    fn zip_new(&self, other: &Bitset, f: impl Fn(u64, u64) -> u64) -> Bitset {
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let mut out = Bitset {
            words,
            len: self.len,
            ones: 0,
        };
        out.mask_tail();
        out.ones = out.words.iter().map(|w| w.count_ones() as usize).sum();
        out
    }

    pub fn and(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.len, other.len);
        self.zip_new(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.len, other.len);
        self.zip_new(other, |a, b| a | b)
    }

    /// Bits set in `self` but not in `other`.
    pub fn and_not(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.len, other.len);
        self.zip_new(other, |a, b| a & !b)
    }

    pub fn not(&self) -> Bitset {
        let mut out = Bitset {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
            ones: 0,
        };
        out.mask_tail();
        out.ones = self.len - self.ones;
        out
    }

    /// |self ∧ other| without materialising the intersection.
    pub fn intersection_count(&self, other: &Bitset) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn union_count(&self, other: &Bitset) -> usize {
        self.ones + other.ones - self.intersection_count(other)
    }

    /// Exact Jaccard similarity of two supports; 0 when both are empty.
    pub fn jaccard(&self, other: &Bitset) -> f64 {
        let inter = self.intersection_count(other);
        let union = self.ones + other.ones - inter;
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    /// Checked width variant used by the public partition operation.
    pub fn try_intersection_count(&self, other: &Bitset) -> Result<usize, Error> {
        self.check_width(other)?;
        Ok(self.intersection_count(other))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + bit)
                }
            })
        })
    }
}
