//! k-partition (one-permutation) MinHash with fixed-width stored minima.
//!
//! Items are routed to `2^k_log2` partitions by the top bits of the bucket
//! word, and each partition keeps the smallest top-`width`-bit truncation of
//! the value word. This is the fixed-precision counterpart HyperMinHash is
//! compared against.

use crate::error::{Error, Result};
use crate::hash::{derive_words, sigma, HashId, HashWords};
use crate::params::MAX_P;

pub const MAX_WIDTH: u8 = 32;

/// Out-of-band marker; stored values never exceed 32 bits.
const EMPTY: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MhSketch {
    k_log2: u8,
    width: u8,
    seed: u64,
    hash_id: HashId,
    values: Vec<u64>,
}

impl MhSketch {
    pub fn new(k_log2: u8, width: u8, seed: u64) -> Result<Self> {
        if k_log2 > MAX_P {
            return Err(Error::ParamRange {
                name: "k_log2",
                value: k_log2 as u64,
                min: 0,
                max: MAX_P as u64,
            });
        }
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::ParamRange {
                name: "width",
                value: width as u64,
                min: 1,
                max: MAX_WIDTH as u64,
            });
        }
        Ok(MhSketch {
            k_log2,
            width,
            seed,
            hash_id: HashId::XXH3_128,
            values: vec![EMPTY; 1 << k_log2],
        })
    }

    pub fn k_log2(&self) -> u8 {
        self.k_log2
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hash_id(&self) -> HashId {
        self.hash_id
    }

    pub fn num_buckets(&self) -> usize {
        self.values.len()
    }

    /// Stored minimum of partition `index`, `None` if nothing landed there.
    pub fn value(&self, index: usize) -> Option<u32> {
        match self.values[index] {
            EMPTY => None,
            v => Some(v as u32),
        }
    }

    pub fn insert(&mut self, item: &[u8]) {
        self.insert_hashed(derive_words(item, self.seed));
    }

    pub fn insert_hashed(&mut self, words: HashWords) {
        let index = sigma(words.bucket, self.k_log2 as u32) as usize;
        let value = sigma(words.exponent, self.width as u32);
        let slot = &mut self.values[index];
        if value < *slot {
            *slot = value;
        }
    }

    fn compatible(&self, other: &MhSketch) -> bool {
        self.k_log2 == other.k_log2
            && self.width == other.width
            && self.seed == other.seed
            && self.hash_id == other.hash_id
    }

    pub fn union(&self, other: &MhSketch) -> Result<MhSketch> {
        if !self.compatible(other) {
            return Err(Error::IncompatibleParams);
        }
        let mut out = self.clone();
        for (a, &b) in out.values.iter_mut().zip(&other.values) {
            *a = (*a).min(b);
        }
        Ok(out)
    }

    /// Fraction of equal non-empty partitions among those non-empty in
    /// either sketch. No collision correction.
    pub fn jaccard(&self, other: &MhSketch) -> Result<f64> {
        if !self.compatible(other) {
            return Err(Error::IncompatibleParams);
        }
        let mut matched = 0usize;
        let mut occupied = 0usize;
        for (&a, &b) in self.values.iter().zip(&other.values) {
            if a != EMPTY || b != EMPTY {
                occupied += 1;
                if a == b {
                    matched += 1;
                }
            }
        }
        if occupied == 0 {
            return Err(Error::BothEmpty);
        }
        Ok(matched as f64 / occupied as f64)
    }
}
