//! On-disk sketch format.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "HMH1"
//! 4       1     version (1)
//! 5       1     p
//! 6       1     q
//! 7       1     r
//! 8       8     hash algorithm id (ASCII, e.g. "XXH3_128")
//! 16      8     seed, little-endian
//! 24      L     payload: 2^p buckets of q+1+r bits each, exponent field
//!               first, most significant bit first, zero-padded to a byte
//! 24+L    4     CRC-32 (IEEE) of bytes [0, 24+L), little-endian
//! ```
//!
//! `L = ceil(2^p * (q + 1 + r) / 8)`.

use crate::bucket::{pack_bucket, unpack_bucket, Bucket};
use crate::error::{Error, Result};
use crate::hash::HashId;
use crate::params::SketchParams;
use crate::sketch::HmhSketch;

pub const MAGIC: [u8; 4] = *b"HMH1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 24;
pub const CHECKSUM_LEN: usize = 4;

pub fn payload_len(params: &SketchParams) -> usize {
    (params.num_buckets() * params.bucket_bits() as usize).div_ceil(8)
}

pub fn encoded_len(params: &SketchParams) -> usize {
    HEADER_LEN + payload_len(params) + CHECKSUM_LEN
}

struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    filled: u32,
}

impl BitWriter {
    fn new(capacity: usize) -> Self {
        BitWriter {
            bytes: Vec::with_capacity(capacity),
            acc: 0,
            filled: 0,
        }
    }

    /// Appends the low `bits` bits of `value`, MSB first. `bits <= 56`.
    fn push(&mut self, value: u64, bits: u32) {
        self.acc = (self.acc << bits) | value;
        self.filled += bits;
        while self.filled >= 8 {
            self.filled -= 8;
            self.bytes.push((self.acc >> self.filled) as u8);
        }
        self.acc &= (1u64 << self.filled) - 1;
    }

    fn finish(mut self) -> Vec<u8> {
        if self.filled > 0 {
            self.bytes.push((self.acc << (8 - self.filled)) as u8);
        }
        self.bytes
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    acc: u64,
    filled: u32,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader {
            bytes,
            pos: 0,
            acc: 0,
            filled: 0,
        }
    }

    /// Caller guarantees enough bytes remain.
    fn take(&mut self, bits: u32) -> u64 {
        while self.filled < bits {
            self.acc = (self.acc << 8) | self.bytes[self.pos] as u64;
            self.pos += 1;
            self.filled += 8;
        }
        self.filled -= bits;
        let value = self.acc >> self.filled;
        self.acc &= (1u64 << self.filled) - 1;
        value
    }
}

pub fn serialize(sketch: &HmhSketch) -> Vec<u8> {
    let params = sketch.params();
    let mut out = Vec::with_capacity(encoded_len(params));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&[params.p(), params.q(), params.r()]);
    out.extend_from_slice(&params.hash_id().0);
    out.extend_from_slice(&params.seed().to_le_bytes());

    let bits = params.bucket_bits();
    let mut payload = BitWriter::new(payload_len(params));
    for b in sketch.buckets() {
        // buckets of a live sketch always satisfy their params
        payload.push(pack_bucket(b, params).expect("valid bucket"), bits);
    }
    out.extend_from_slice(&payload.finish());

    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

pub fn deserialize(bytes: &[u8]) -> Result<HmhSketch> {
    if bytes.len() < MAGIC.len() || bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN + CHECKSUM_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN + CHECKSUM_LEN,
            actual: bytes.len(),
        });
    }
    if bytes[4] != VERSION {
        return Err(Error::UnsupportedVersion(bytes[4]));
    }
    let (body, tail) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    let stored = u32::from_le_bytes(tail.try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }

    let hash_id = HashId(bytes[8..16].try_into().unwrap());
    if hash_id != HashId::XXH3_128 {
        return Err(Error::UnsupportedHash(hash_id.0));
    }
    let seed = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let params = SketchParams::with_seed(bytes[5], bytes[6], bytes[7], seed)?;

    let expected = encoded_len(&params);
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::TrailingBytes {
            expected,
            actual: bytes.len(),
        });
    }

    let bits = params.bucket_bits();
    let mut reader = BitReader::new(&body[HEADER_LEN..]);
    let buckets = (0..params.num_buckets())
        .map(|_| unpack_bucket(reader.take(bits), &params))
        .collect::<Result<Vec<Bucket>>>()?;
    HmhSketch::from_buckets(params, &buckets)
}
