use crate::error::{Error, Result};
use crate::hash::{HashId, MAX_Q};

pub const MAX_P: u8 = 24;
pub const MAX_R: u8 = 32;

/// Sketch configuration. Two sketches are comparable iff their params are equal.
///
/// * `p`: the sketch has `2^p` buckets.
/// * `q`: exponents range over `1..=2^q` (0 marks an empty bucket).
/// * `r`: mantissa width in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SketchParams {
    p: u8,
    q: u8,
    r: u8,
    seed: u64,
    hash_id: HashId,
}

fn check(name: &'static str, value: u8, min: u8, max: u8) -> Result<()> {
    if value < min || value > max {
        return Err(Error::ParamRange {
            name,
            value: value as u64,
            min: min as u64,
            max: max as u64,
        });
    }
    Ok(())
}

impl SketchParams {
    /// Params with seed 0 and the default hash.
    pub fn new(p: u8, q: u8, r: u8) -> Result<Self> {
        Self::with_seed(p, q, r, 0)
    }

    pub fn with_seed(p: u8, q: u8, r: u8, seed: u64) -> Result<Self> {
        check("p", p, 0, MAX_P)?;
        check("q", q, 1, MAX_Q)?;
        check("r", r, 0, MAX_R)?;
        Ok(SketchParams {
            p,
            q,
            r,
            seed,
            hash_id: HashId::XXH3_128,
        })
    }

    /// Replace the seed; all other fields are unchanged.
    pub fn seeded(self, seed: u64) -> Self {
        SketchParams { seed, ..self }
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hash_id(&self) -> HashId {
        self.hash_id
    }

    pub fn num_buckets(&self) -> usize {
        1 << self.p
    }

    /// Largest exponent value, `2^q`.
    pub fn max_exponent(&self) -> u32 {
        1 << self.q
    }

    /// Logical bits per bucket: `q + 1` exponent bits plus `r` mantissa bits.
    pub fn bucket_bits(&self) -> u32 {
        self.q as u32 + 1 + self.r as u32
    }
}
