//! Cardinality, Jaccard and intersection estimates over [`HmhSketch`] values.

use crate::collision::{expected_collisions_approx, expected_collisions_exact};
use crate::error::{Error, Result};
use crate::sketch::HmhSketch;

/// How (or whether) to subtract expected accidental collisions from a
/// Jaccard estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Correction {
    #[default]
    None,
    Exact,
    Approximate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JaccardResult {
    /// Debiased estimate, clamped to `[0, 1]`.
    pub estimate: f64,
    /// Buckets equal and non-empty in both sketches.
    pub matched: usize,
    /// Buckets non-empty in either sketch.
    pub occupied: usize,
    /// Expected accidental collisions subtracted from `matched`.
    pub correction: f64,
    pub correction_method: Correction,
}

impl JaccardResult {
    /// `(matched - correction) / occupied` before clamping. Unbiased for
    /// disjoint sets when the correction is exact, unlike the clamped value.
    pub fn raw_estimate(&self) -> f64 {
        (self.matched as f64 - self.correction) / self.occupied as f64
    }
}

/// Bias-correction constant `alpha_m` of the HyperLogLog estimator.
fn hll_alpha(m: usize) -> f64 {
    match m {
        16 => 0.673,
        32 => 0.697,
        64 => 0.709,
        _ => 0.7213 / (1.0 + 1.079 / m as f64),
    }
}

/// Standard HyperLogLog estimate from leading-one registers, with linear
/// counting for small ranges. `exponents.len()` must be `2^p`.
pub fn hll_subestimate(exponents: &[u8], p: u8) -> f64 {
    let m = 1usize << p;
    debug_assert_eq!(exponents.len(), m);
    let mut zeros = 0usize;
    let mut sum = 0.0;
    for &e in exponents {
        if e == 0 {
            zeros += 1;
        }
        sum += (-(e as f64)).exp2();
    }
    let m = m as f64;
    let raw = hll_alpha(1 << p) * m * m / sum;
    if raw <= 2.5 * m && zeros > 0 {
        m * (m / zeros as f64).ln()
    } else {
        raw
    }
}

/// Estimated number of distinct items inserted into `sketch`.
///
/// Uses the exponents as HyperLogLog registers; once that estimate reaches
/// `1024 * 2^p` the exponent alone is too coarse and the full floating-point
/// minimum of each bucket is used instead.
pub fn estimate_cardinality(sketch: &HmhSketch) -> Result<f64> {
    let exponents: Vec<u8> = sketch.buckets().map(|b| b.exponent).collect();
    let m = sketch.num_buckets() as f64;
    let estimate = hll_subestimate(&exponents, sketch.params().p());
    if estimate < 1024.0 * m {
        return Ok(estimate);
    }
    let scale = (sketch.params().r() as f64).exp2();
    let sum: f64 = sketch
        .buckets()
        .map(|b| (-(b.exponent as f64)).exp2() * (1.0 + b.mantissa as f64 / scale))
        .sum();
    if sum == 0.0 {
        return Err(Error::SaturatedSketch);
    }
    Ok(m * m / sum)
}

/// Fraction of matching buckets, optionally debiased by the expected number
/// of accidental collisions at the two sketches' estimated cardinalities.
pub fn jaccard(s: &HmhSketch, t: &HmhSketch, mode: Correction) -> Result<JaccardResult> {
    if s.params() != t.params() {
        return Err(Error::IncompatibleParams);
    }
    let mut matched = 0;
    let mut occupied = 0;
    for (&a, &b) in s.registers().iter().zip(t.registers()) {
        if a != 0 || b != 0 {
            occupied += 1;
            if a == b {
                matched += 1;
            }
        }
    }
    if occupied == 0 {
        return Err(Error::BothEmpty);
    }
    let correction = match mode {
        Correction::None => 0.0,
        Correction::Exact | Correction::Approximate => {
            let n = estimate_cardinality(s)?;
            let m = estimate_cardinality(t)?;
            if mode == Correction::Exact {
                expected_collisions_exact(n.max(m), n.min(m), s.params())
            } else {
                expected_collisions_approx(n, m, s.params())?
            }
        }
    };
    let estimate = ((matched as f64 - correction) / occupied as f64).clamp(0.0, 1.0);
    Ok(JaccardResult {
        estimate,
        matched,
        occupied,
        correction,
        correction_method: mode,
    })
}

/// Estimated `|A ∩ B|` as the Jaccard estimate times the union cardinality.
pub fn intersection(s: &HmhSketch, t: &HmhSketch, mode: Correction) -> Result<f64> {
    let j = jaccard(s, t, mode)?;
    Ok(j.estimate * estimate_cardinality(&s.union(t)?)?)
}
