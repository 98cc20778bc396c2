use crate::bucket::{mantissa_mask, Bucket};
use crate::error::{Error, Result};
use crate::hash::{derive_words, rho_capped, sigma, HashWords};
use crate::params::SketchParams;

/// A HyperMinHash sketch: `2^p` buckets, each holding the floating-point
/// reading of the smallest hash routed to it.
///
/// Registers are kept max-transformed (see [`crate::bucket`]), so inserting
/// and merging are both a per-register `max`.
///
/// A sketch is a plain value. Mutation needs `&mut`; to ingest in parallel,
/// shard the stream over per-thread sketches and combine them with
/// [`HmhSketch::union`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmhSketch {
    params: SketchParams,
    registers: Vec<u64>,
}

impl HmhSketch {
    pub fn new(params: SketchParams) -> Self {
        HmhSketch {
            params,
            registers: vec![0; params.num_buckets()],
        }
    }

    /// Builds a sketch from explicit bucket values, validating each one.
    pub fn from_buckets(params: SketchParams, buckets: &[Bucket]) -> Result<Self> {
        if buckets.len() != params.num_buckets() {
            return Err(Error::ParamRange {
                name: "bucket count",
                value: buckets.len() as u64,
                min: params.num_buckets() as u64,
                max: params.num_buckets() as u64,
            });
        }
        let mut registers = Vec::with_capacity(buckets.len());
        for b in buckets {
            b.validate(&params)?;
            registers.push(b.to_ordered(params.r()));
        }
        Ok(HmhSketch { params, registers })
    }

    pub fn params(&self) -> &SketchParams {
        &self.params
    }

    pub fn num_buckets(&self) -> usize {
        self.registers.len()
    }

    pub fn bucket(&self, index: usize) -> Bucket {
        Bucket::from_ordered(self.registers[index], self.params.r())
    }

    pub fn buckets(&self) -> impl ExactSizeIterator<Item = Bucket> + '_ {
        let r = self.params.r();
        self.registers
            .iter()
            .map(move |&w| Bucket::from_ordered(w, r))
    }

    pub fn is_empty(&self) -> bool {
        self.registers.iter().all(|&w| w == 0)
    }

    pub(crate) fn registers(&self) -> &[u64] {
        &self.registers
    }

    pub fn insert(&mut self, item: &[u8]) {
        let words = derive_words(item, self.params.seed());
        self.insert_hashed(words);
    }

    /// Inserts an item whose words were derived with this sketch's seed.
    pub fn insert_hashed(&mut self, words: HashWords) {
        let (index, candidate) = self.locate(words);
        let slot = &mut self.registers[index];
        if candidate > *slot {
            *slot = candidate;
        }
    }

    /// Bucket index and candidate bucket of a hashed item.
    pub fn bucket_for(&self, words: HashWords) -> (usize, Bucket) {
        let (index, candidate) = self.locate(words);
        (index, Bucket::from_ordered(candidate, self.params.r()))
    }

    #[inline]
    fn locate(&self, words: HashWords) -> (usize, u64) {
        let p = &self.params;
        let index = sigma(words.bucket, p.p() as u32) as usize;
        let exponent = rho_capped(words.exponent, p.max_exponent()) as u64;
        let mantissa = sigma(words.mantissa, p.r() as u32);
        let r = p.r();
        (index, (exponent << r) | (mantissa_mask(r) - mantissa))
    }

    /// Bucket-wise minimum-hash merge; the sketch of the union of both inputs.
    pub fn union(&self, other: &HmhSketch) -> Result<HmhSketch> {
        let mut out = self.clone();
        out.merge(other)?;
        Ok(out)
    }

    pub fn merge(&mut self, other: &HmhSketch) -> Result<()> {
        if self.params != other.params {
            return Err(Error::IncompatibleParams);
        }
        for (a, &b) in self.registers.iter_mut().zip(&other.registers) {
            *a = (*a).max(b);
        }
        Ok(())
    }
}

impl<T: AsRef<[u8]>> Extend<T> for HmhSketch {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for item in iter {
            self.insert(item.as_ref());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bucket::bucket_less;

    #[test]
    fn new_sketch_is_empty() {
        let s = HmhSketch::new(SketchParams::new(2, 6, 10).unwrap());
        assert_eq!(s.num_buckets(), 4);
        assert!(s.buckets().all(|b| b == Bucket::EMPTY));
        let single = HmhSketch::new(SketchParams::new(0, 6, 10).unwrap());
        assert_eq!(single.num_buckets(), 1);
    }

    #[test]
    fn first_insert_fills_one_bucket() {
        let mut s = HmhSketch::new(SketchParams::new(4, 6, 10).unwrap());
        s.insert(b"x");
        assert_eq!(s.buckets().filter(|b| !b.is_empty()).count(), 1);
        let before = s.clone();
        s.insert(b"x");
        assert_eq!(s, before);
    }

    #[test]
    fn floating_point_reading_of_worked_example() {
        // hash stream 0.01 000000000001 01011101...: partition 01, exponent 12,
        // eight mantissa bits 01011101
        let mut s = HmhSketch::new(SketchParams::new(2, 4, 8).unwrap());
        let words = HashWords {
            bucket: 0b01 << 62 | 0x1234,
            exponent: 1 << (63 - 11) | 0xff,
            mantissa: 0b0101_1101 << 56 | 0xabc,
        };
        s.insert_hashed(words);
        assert_eq!(s.bucket(1), Bucket::new(12, 0b0101_1101));
        for i in [0, 2, 3] {
            assert!(s.bucket(i).is_empty());
        }
    }

    #[test]
    fn insert_keeps_smaller_hash() {
        let mut s = HmhSketch::new(SketchParams::new(0, 6, 10).unwrap());
        let w = |e: u32, m: u64| HashWords {
            bucket: 0,
            exponent: 1 << (64 - e),
            mantissa: m << 54,
        };
        s.insert_hashed(w(3, 500));
        assert_eq!(s.bucket(0), Bucket::new(3, 500));
        s.insert_hashed(w(5, 900));
        assert_eq!(s.bucket(0), Bucket::new(5, 900));
        s.insert_hashed(w(5, 950));
        assert_eq!(s.bucket(0), Bucket::new(5, 900));
        s.insert_hashed(w(5, 300));
        assert_eq!(s.bucket(0), Bucket::new(5, 300));
        s.insert_hashed(w(4, 0));
        assert_eq!(s.bucket(0), Bucket::new(5, 300));
    }

    #[test]
    fn exponent_is_capped() {
        let mut s = HmhSketch::new(SketchParams::new(0, 2, 3).unwrap());
        s.insert_hashed(HashWords {
            bucket: 0,
            exponent: 0,
            mantissa: u64::MAX,
        });
        assert_eq!(s.bucket(0), Bucket::new(4, 7));
    }

    #[test]
    fn union_is_bucketwise_minimum() {
        let params = SketchParams::new(1, 6, 10).unwrap();
        let s = HmhSketch::from_buckets(params, &[Bucket::new(3, 500), Bucket::EMPTY]).unwrap();
        let t = HmhSketch::from_buckets(params, &[Bucket::new(5, 900), Bucket::new(2, 1)]).unwrap();
        let u = s.union(&t).unwrap();
        assert_eq!(u.bucket(0), Bucket::new(5, 900));
        assert_eq!(u.bucket(1), Bucket::new(2, 1));
        assert_eq!(s.union(&HmhSketch::new(params)).unwrap(), s);
    }

    #[test]
    fn union_rejects_mismatched_params() {
        let a = HmhSketch::new(SketchParams::new(4, 6, 10).unwrap());
        let b = HmhSketch::new(SketchParams::new(4, 6, 9).unwrap());
        let c = HmhSketch::new(SketchParams::with_seed(4, 6, 10, 1).unwrap());
        assert_eq!(a.union(&b), Err(Error::IncompatibleParams));
        assert_eq!(a.union(&c), Err(Error::IncompatibleParams));
    }

    #[test]
    fn insert_never_raises_the_minimum() {
        let mut s = HmhSketch::new(SketchParams::new(3, 3, 2).unwrap());
        for i in 0u32..2000 {
            let before: Vec<Bucket> = s.buckets().collect();
            s.insert(&i.to_le_bytes());
            for (old, new) in before.iter().zip(s.buckets()) {
                assert!(!bucket_less(*old, new));
            }
        }
    }

    #[test]
    fn from_buckets_validates() {
        let params = SketchParams::new(1, 2, 2).unwrap();
        assert!(HmhSketch::from_buckets(params, &[Bucket::EMPTY]).is_err());
        assert!(HmhSketch::from_buckets(params, &[Bucket::EMPTY, Bucket::new(5, 0)]).is_err());
    }
}
