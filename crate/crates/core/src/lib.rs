//! HyperMinHash: MinHash compressed to LogLog-sized buckets.
//!
//! Each bucket stores the minimum hash of its partition in floating-point
//! form, an exponent (the position of the leading one bit, as in
//! HyperLogLog) and a few mantissa bits. The result supports everything a
//! k-partition MinHash does (streaming inserts, lossless unions, Jaccard and
//! intersection estimates) while bucket size grows with `log log n`.
//!
//! ```
//! use hyperminhash::{jaccard, Correction, HmhSketch, SketchParams};
//!
//! let params = SketchParams::new(10, 6, 10).unwrap();
//! let mut a = HmhSketch::new(params);
//! let mut b = HmhSketch::new(params);
//! for i in 0u32..3000 {
//!     a.insert(&i.to_le_bytes());
//! }
//! for i in 1000u32..4000 {
//!     b.insert(&i.to_le_bytes());
//! }
//! let j = jaccard(&a, &b, Correction::None).unwrap();
//! assert!((j.estimate - 0.5).abs() < 0.1);
//! ```

pub mod bucket;
pub mod collision;
pub mod error;
pub mod estimate;
pub mod experiment;
pub mod format;
pub mod hash;
pub mod minhash;
pub mod params;
pub mod sketch;

pub use bucket::{bucket_less, pack_bucket, unpack_bucket, Bucket};
pub use collision::{
    collision_bound, estimate_collisions, expected_collisions_approx, expected_collisions_exact,
    gamma_bound, recommend_params, variance_bound, CollisionEstimate, CollisionMethod,
};
pub use error::{Error, Result};
pub use estimate::{
    estimate_cardinality, hll_subestimate, intersection, jaccard, Correction, JaccardResult,
};
pub use format::{deserialize, serialize};
pub use hash::{derive_words, rho, sigma, HashId, HashWords};
pub use minhash::MhSketch;
pub use params::SketchParams;
pub use sketch::HmhSketch;
