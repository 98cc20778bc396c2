//! Bucket values and their word encodings.
//!
//! A bucket stores the floating-point reading of the minimum hash seen in its
//! partition: an exponent (leading-one position) and an `r`-bit mantissa. A
//! larger exponent means a smaller hash, so the minimum-hash order on buckets
//! is "larger exponent, then smaller mantissa", with the empty bucket last.
//!
//! Two word encodings exist:
//!
//! * the plain packing `exponent * 2^r + mantissa`, used in files;
//! * the max-transform, `exponent * 2^r + (2^r - 1 - mantissa)`, in which the
//!   minimum-hash order becomes plain numeric `>` on words. Sketches keep
//!   their registers in this form so insert and union are a single `max`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::params::SketchParams;

/// Widest packed bucket, in bits.
pub const MAX_PACKED_BITS: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Bucket {
    /// 0 for an empty bucket, otherwise in `1..=2^q`.
    pub exponent: u8,
    pub mantissa: u32,
}

impl Bucket {
    pub const EMPTY: Bucket = Bucket {
        exponent: 0,
        mantissa: 0,
    };

    pub fn new(exponent: u8, mantissa: u32) -> Self {
        Bucket { exponent, mantissa }
    }

    pub fn is_empty(&self) -> bool {
        self.exponent == 0
    }

    /// Order by the minimum hash each bucket represents.
    pub fn hash_cmp(&self, other: &Bucket) -> Ordering {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => other
                .exponent
                .cmp(&self.exponent)
                .then(self.mantissa.cmp(&other.mantissa)),
        }
    }

    /// Checks the bucket invariants against `params`.
    pub fn validate(&self, params: &SketchParams) -> Result<()> {
        let bad = Error::InvalidBucket {
            exponent: self.exponent as u64,
            mantissa: self.mantissa as u64,
        };
        if self.exponent as u32 > params.max_exponent() {
            return Err(bad);
        }
        if self.is_empty() && self.mantissa != 0 {
            return Err(bad);
        }
        if params.r() < 32 && self.mantissa >> params.r() != 0 {
            return Err(bad);
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn to_ordered(self, r: u8) -> u64 {
        if self.is_empty() {
            return 0;
        }
        let mask = mantissa_mask(r);
        ((self.exponent as u64) << r) | (mask - self.mantissa as u64)
    }

    #[inline]
    pub(crate) fn from_ordered(word: u64, r: u8) -> Bucket {
        if word == 0 {
            return Bucket::EMPTY;
        }
        let mask = mantissa_mask(r);
        Bucket {
            exponent: (word >> r) as u8,
            mantissa: (mask - (word & mask)) as u32,
        }
    }
}

#[inline]
pub(crate) fn mantissa_mask(r: u8) -> u64 {
    (1u64 << r) - 1
}

/// `a` represents a strictly smaller minimum hash than `b`.
pub fn bucket_less(a: Bucket, b: Bucket) -> bool {
    a.hash_cmp(&b) == Ordering::Less
}

fn check_width(params: &SketchParams) -> Result<()> {
    let bits = params.bucket_bits();
    if bits > MAX_PACKED_BITS {
        return Err(Error::WidthOverflow { bits });
    }
    Ok(())
}

/// Plain packing, `exponent * 2^r + mantissa`, in `q + 1 + r` bits.
pub fn pack_bucket(b: Bucket, params: &SketchParams) -> Result<u64> {
    check_width(params)?;
    b.validate(params)?;
    Ok(((b.exponent as u64) << params.r()) | b.mantissa as u64)
}

pub fn unpack_bucket(word: u64, params: &SketchParams) -> Result<Bucket> {
    check_width(params)?;
    let r = params.r();
    let exponent = word >> r;
    let mantissa = word & mantissa_mask(r);
    if exponent > params.max_exponent() as u64 {
        return Err(Error::InvalidBucket { exponent, mantissa });
    }
    let b = Bucket {
        exponent: exponent as u8,
        mantissa: mantissa as u32,
    };
    b.validate(params)?;
    Ok(b)
}

/// Max-transformed packing: `bucket_less(a, b)` iff `transform(a) > transform(b)`.
pub fn pack_bucket_ordered(b: Bucket, params: &SketchParams) -> Result<u64> {
    check_width(params)?;
    b.validate(params)?;
    Ok(b.to_ordered(params.r()))
}

pub fn unpack_bucket_ordered(word: u64, params: &SketchParams) -> Result<Bucket> {
    check_width(params)?;
    let b = Bucket::from_ordered(word, params.r());
    if word != 0 && (word >> params.r()) == 0 {
        return Err(Error::InvalidBucket {
            exponent: 0,
            mantissa: word,
        });
    }
    b.validate(params)?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_buckets(params: &SketchParams) -> Vec<Bucket> {
        let mut out = vec![Bucket::EMPTY];
        for e in 1..=params.max_exponent() {
            for m in 0..(1u32 << params.r()) {
                out.push(Bucket::new(e as u8, m));
            }
        }
        out
    }

    #[test]
    fn order_examples() {
        assert!(bucket_less(Bucket::new(5, 900), Bucket::new(3, 500)));
        assert!(!bucket_less(Bucket::new(3, 500), Bucket::new(5, 900)));
        assert!(bucket_less(Bucket::new(5, 300), Bucket::new(5, 900)));
        assert!(bucket_less(Bucket::new(1, 1023), Bucket::EMPTY));
        assert!(!bucket_less(Bucket::EMPTY, Bucket::new(1, 1023)));
        assert!(!bucket_less(Bucket::EMPTY, Bucket::EMPTY));
        assert!(!bucket_less(Bucket::new(4, 4), Bucket::new(4, 4)));
    }

    #[test]
    fn plain_packing() {
        let params = SketchParams::new(0, 6, 10).unwrap();
        assert_eq!(pack_bucket(Bucket::EMPTY, &params).unwrap(), 0);
        assert_eq!(pack_bucket(Bucket::new(12, 93), &params).unwrap(), 12381);
        assert_eq!(unpack_bucket(12381, &params).unwrap(), Bucket::new(12, 93));
    }

    #[test]
    fn packing_rejects_invalid_buckets() {
        let params = SketchParams::new(0, 4, 4).unwrap();
        assert!(pack_bucket(Bucket::new(17, 0), &params).is_err());
        assert!(pack_bucket(Bucket::new(3, 16), &params).is_err());
        assert!(pack_bucket(Bucket::new(0, 3), &params).is_err());
        // exponent 17 does not exist at q = 4
        assert!(unpack_bucket(17 << 4, &params).is_err());
        // empty exponent with stray mantissa
        assert!(unpack_bucket(5, &params).is_err());
    }

    #[test]
    fn exhaustive_round_trip_q4_r4() {
        let params = SketchParams::new(0, 4, 4).unwrap();
        let buckets = all_buckets(&params);
        // every word in the 9-bit space either decodes to a unique bucket or is rejected
        let mut decoded = 0;
        for word in 0..(1u64 << params.bucket_bits()) {
            if let Ok(b) = unpack_bucket(word, &params) {
                assert_eq!(pack_bucket(b, &params).unwrap(), word);
                decoded += 1;
            }
        }
        assert_eq!(decoded, buckets.len());
        for b in &buckets {
            assert_eq!(
                unpack_bucket(pack_bucket(*b, &params).unwrap(), &params).unwrap(),
                *b
            );
            let t = pack_bucket_ordered(*b, &params).unwrap();
            assert_eq!(unpack_bucket_ordered(t, &params).unwrap(), *b);
        }
    }

    #[test]
    fn max_transform_matches_bucket_order() {
        let params = SketchParams::new(0, 4, 4).unwrap();
        let buckets = all_buckets(&params);
        for a in &buckets {
            let ta = pack_bucket_ordered(*a, &params).unwrap();
            for b in &buckets {
                let tb = pack_bucket_ordered(*b, &params).unwrap();
                assert_eq!(bucket_less(*a, *b), ta > tb, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn full_width_mantissa() {
        let params = SketchParams::new(0, 6, 32).unwrap();
        let b = Bucket::new(64, u32::MAX);
        assert_eq!(
            unpack_bucket(pack_bucket(b, &params).unwrap(), &params).unwrap(),
            b
        );
        assert_eq!(Bucket::from_ordered(b.to_ordered(32), 32), b);
        assert!(Bucket::new(64, 0).to_ordered(32) > b.to_ordered(32));
    }
}
