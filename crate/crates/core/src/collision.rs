//! Expected accidental collisions between sketches of disjoint sets.
//!
//! Two disjoint sets can still leave identical buckets when their minimum
//! hashes fall in the same (exponent, mantissa) cell. The probability of that
//! is the mass of the diagonal squares `[b1, b2]^2` under the joint density of
//! the two per-bucket minima, summed over every cell of the encoding:
//!
//! ```text
//! E[C] = 2^p * sum_{i=1}^{2^q} sum_{j=0}^{2^r-1}
//!            [(1-b1)^n - (1-b2)^n] * [(1-b1)^m - (1-b2)^m]
//! ```
//!
//! where for `i < 2^q` the cell is `[(2^r+j), (2^r+j+1)] / 2^(p+r+i)` and the
//! last exponent row (the capped counter) is `[j, j+1] / 2^(p+r+i-1)`.

use crate::error::{Error, Result};
use crate::params::{SketchParams, MAX_P, MAX_R};

/// Limit of `E[C] * 2^(r-p)` for `n = m` large, used by the fast approximation.
pub const ASYMPTOTIC_COLLISION_CONSTANT: f64 = 0.169919487159739093975315012348;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionMethod {
    Exact,
    Approximate,
    /// The closed-form upper bound rather than an estimate.
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionEstimate {
    /// Larger of the two cardinalities.
    pub n: f64,
    pub m: f64,
    pub expected: f64,
    /// `expected^2 + expected`.
    pub variance_bound: f64,
    pub method: CollisionMethod,
}

/// Estimates `E[C]` for cardinalities `a` and `b` (in either order).
pub fn estimate_collisions(
    a: f64,
    b: f64,
    params: &SketchParams,
    method: CollisionMethod,
) -> Result<CollisionEstimate> {
    let (n, m) = if a >= b { (a, b) } else { (b, a) };
    let expected = match method {
        CollisionMethod::Exact => expected_collisions_exact(n, m, params),
        CollisionMethod::Approximate => expected_collisions_approx(n, m, params)?,
        CollisionMethod::Bound => collision_bound(n, params),
    };
    Ok(CollisionEstimate {
        n,
        m,
        expected,
        variance_bound: variance_bound(expected),
        method,
    })
}

/// `(1 - b1)^n - (1 - b1 - width)^n`, evaluated without cancellation.
#[inline]
fn mass_between(n: f64, b1: f64, width: f64) -> f64 {
    let below = (n * (-b1).ln_1p()).exp();
    let ratio = (-width / (1.0 - b1)).ln_1p();
    below * -(n * ratio).exp_m1()
}

pub(crate) fn exact_sum(n: f64, m: f64, p: u8, q: u8, r: u8) -> f64 {
    if !(n > 0.0 && m > 0.0) {
        return 0.0;
    }
    let cap = 1u32 << q;
    let cells = 1u64 << r;
    let mut total = 0.0;
    for i in 1..=cap {
        let (offset, shift) = if i < cap {
            (cells, p as i32 + r as i32 + i as i32)
        } else {
            (0, p as i32 + r as i32 + i as i32 - 1)
        };
        let width = (-shift as f64).exp2();
        let mut row = 0.0;
        for j in 0..cells {
            let b1 = (offset + j) as f64 * width;
            row += mass_between(n, b1, width) * mass_between(m, b1, width);
        }
        total += row;
    }
    total * (p as f64).exp2()
}

/// Exact expected number of colliding buckets between sketches of disjoint
/// sets of sizes `n` and `m`. Cost is `2^q * 2^r` cell evaluations.
pub fn expected_collisions_exact(n: f64, m: f64, params: &SketchParams) -> f64 {
    exact_sum(n, m, params.p(), params.q(), params.r())
}

/// Fast approximation of [`expected_collisions_exact`].
///
/// Below `2^(p+5)` it divides the `r = 0` (HyperLogLog-only) collision count
/// by `2^r`; above that it uses the asymptotic constant scaled by the
/// cardinality-ratio factor. Fails once `n > 2^(2^q + r)`.
pub fn expected_collisions_approx(n: f64, m: f64, params: &SketchParams) -> Result<f64> {
    let (n, m) = if n >= m { (n, m) } else { (m, n) };
    let (p, q, r) = (params.p() as i32, params.q(), params.r() as i32);
    if n > ((1i32 << q) as f64 + r as f64).exp2() {
        return Err(Error::CardinalityTooLarge { n });
    }
    if m.is_nan() || m <= 0.0 {
        return Ok(0.0);
    }
    if n > ((p + 5) as f64).exp2() {
        let ratio = n / m;
        let phi = 4.0 * ratio / ((1.0 + ratio) * (1.0 + ratio));
        Ok(ASYMPTOTIC_COLLISION_CONSTANT * ((p - r) as f64).exp2() * phi)
    } else {
        Ok(exact_sum(n, m, params.p(), q, 0) * (-r as f64).exp2())
    }
}

/// Upper bound on `E[C]` for sketches of disjoint sets with larger size `n`:
/// `2^p * (5 / 2^r + n / 2^(p + 2^q + r))`.
pub fn collision_bound(n: f64, params: &SketchParams) -> f64 {
    let (p, r) = (params.p() as f64, params.r() as f64);
    let cap = (1u32 << params.q()) as f64;
    p.exp2() * (5.0 * (-r).exp2() + n * (-(p + cap + r)).exp2())
}

/// Upper bound on the single-bucket collision probability:
/// `6 / 2^r + n / 2^(2^q + r)`.
pub fn gamma_bound(n: f64, q: u8, r: u8) -> f64 {
    let cap = (1u32 << q) as f64;
    let r = r as f64;
    6.0 * (-r).exp2() + n * (-(cap + r)).exp2()
}

/// Upper bound on `Var(C)` given `E[C]`.
pub fn variance_bound(expected: f64) -> f64 {
    expected * expected + expected
}

/// Smallest params meeting a relative error `epsilon` on Jaccard indices of at
/// least `t_min`, for sets of up to `n_max` items.
///
/// `r = ceil(log2(6 / (epsilon * t_min)))` keeps the collision error under
/// `epsilon * t_min`; `p = ceil(log2(epsilon^-2))` controls sampling error; `q`
/// is the smallest value with `n_max < 2^(2^q)`.
pub fn recommend_params(epsilon: f64, t_min: f64, n_max: u128) -> Result<SketchParams> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Infeasible(format!(
            "epsilon {epsilon} not in (0, 1]"
        )));
    }
    if !(t_min > 0.0 && t_min <= 1.0) {
        return Err(Error::Infeasible(format!("t_min {t_min} not in (0, 1]")));
    }
    let r = (6.0 / (epsilon * t_min)).log2().ceil().max(0.0);
    let p = (1.0 / (epsilon * epsilon)).log2().ceil().max(0.0);
    if r > MAX_R as f64 {
        return Err(Error::Infeasible(format!("needs r = {r} > {MAX_R}")));
    }
    if p > MAX_P as f64 {
        return Err(Error::Infeasible(format!("needs p = {p} > {MAX_P}")));
    }
    let bits = 128 - n_max.leading_zeros();
    // n_max < 2^(2^q)  <=>  bit length of n_max <= 2^q
    let q = (1u8..=7).find(|&q| bits <= 1 << q).unwrap_or(8);
    if q > 6 {
        return Err(Error::Infeasible(format!(
            "n_max = {n_max} needs q = {q} > 6"
        )));
    }
    SketchParams::new(p as u8, q, r as u8)
}
