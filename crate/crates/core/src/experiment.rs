//! Reproducible accuracy experiments.
//!
//! [`run_similarity_sweep`] compares Jaccard accuracy of equal-budget sketches
//! across cardinalities; [`run_collision_trials`] checks the collision model
//! against sketches of synthetic disjoint sets.
//!
//! Trials run in parallel. Trial `i` hashes with seed `base + i` and results
//! are reduced in trial order, so output depends only on the configuration.

use std::fmt;
use std::io;

use rayon::prelude::*;
use serde::Serialize;

use crate::collision::{collision_bound, expected_collisions_exact, variance_bound};
use crate::error::{Error, Result};
use crate::estimate::{jaccard, Correction};
use crate::hash::derive_words;
use crate::minhash::MhSketch;
use crate::params::SketchParams;
use crate::sketch::HmhSketch;

/// Default per-set item cap for sweeps.
pub const DEFAULT_MAX_ITEMS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethod {
    HyperMinHash { p: u8, q: u8, r: u8 },
    MinHash { k_log2: u8, width: u8 },
}

impl SweepMethod {
    /// The three 256-byte configurations: HyperMinHash with 256 buckets
    /// (4-bit exponent budget, 4-bit mantissa), MinHash with 256 8-bit
    /// buckets and MinHash with 128 16-bit buckets.
    pub fn equal_budget_set() -> Vec<SweepMethod> {
        vec![
            SweepMethod::HyperMinHash { p: 8, q: 4, r: 4 },
            SweepMethod::MinHash {
                k_log2: 8,
                width: 8,
            },
            SweepMethod::MinHash {
                k_log2: 7,
                width: 16,
            },
        ]
    }
}

impl fmt::Display for SweepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepMethod::HyperMinHash { p, q, r } => write!(f, "hyperminhash-p{p}-q{q}-r{r}"),
            SweepMethod::MinHash { k_log2, width } => {
                write!(f, "minhash-k{}-w{width}", 1u64 << k_log2)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub methods: Vec<SweepMethod>,
    pub cardinalities: Vec<u64>,
    pub trials: usize,
    pub true_jaccard: f64,
    pub seed: u64,
    pub max_items: u64,
}

impl SweepConfig {
    pub fn new(cardinalities: Vec<u64>, trials: usize, true_jaccard: f64, seed: u64) -> Self {
        SweepConfig {
            methods: SweepMethod::equal_budget_set(),
            cardinalities,
            trials,
            true_jaccard,
            seed,
            max_items: DEFAULT_MAX_ITEMS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub method: String,
    pub cardinality: u64,
    pub trials: usize,
    pub mean_rel_error: f64,
    pub stddev_rel_error: f64,
}

/// Number of shared items for two sets of size `n` with Jaccard index `t`:
/// `s / (2n - s) = t`.
pub fn shared_items(n: u64, t: f64) -> u64 {
    ((2.0 * n as f64 * t / (1.0 + t)).round() as u64).min(n)
}

enum Pair {
    Hmh(HmhSketch, HmhSketch),
    Mh(MhSketch, MhSketch),
}

impl Pair {
    fn new(method: SweepMethod, seed: u64) -> Result<Pair> {
        Ok(match method {
            SweepMethod::HyperMinHash { p, q, r } => {
                let params = SketchParams::with_seed(p, q, r, seed)?;
                Pair::Hmh(HmhSketch::new(params), HmhSketch::new(params))
            }
            SweepMethod::MinHash { k_log2, width } => {
                let s = MhSketch::new(k_log2, width, seed)?;
                Pair::Mh(s.clone(), s)
            }
        })
    }

    fn jaccard(&self) -> Result<f64> {
        match self {
            Pair::Hmh(a, b) => Ok(jaccard(a, b, Correction::None)?.estimate),
            Pair::Mh(a, b) => a.jaccard(b),
        }
    }
}

fn mean_and_stddev(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Relative Jaccard error of every method for one trial at cardinality `n`.
fn sweep_trial(methods: &[SweepMethod], n: u64, shared: u64, seed: u64) -> Result<Vec<f64>> {
    let mut pairs = methods
        .iter()
        .map(|&m| Pair::new(m, seed))
        .collect::<Result<Vec<_>>>()?;
    // A = [0, n), B = [n - shared, 2n - shared)
    let b_start = n - shared;
    for item in 0..(2 * n - shared) {
        let words = derive_words(&item.to_le_bytes(), seed);
        let (in_a, in_b) = (item < n, item >= b_start);
        for pair in &mut pairs {
            match pair {
                Pair::Hmh(a, b) => {
                    if in_a {
                        a.insert_hashed(words);
                    }
                    if in_b {
                        b.insert_hashed(words);
                    }
                }
                Pair::Mh(a, b) => {
                    if in_a {
                        a.insert_hashed(words);
                    }
                    if in_b {
                        b.insert_hashed(words);
                    }
                }
            }
        }
    }
    let truth = shared as f64 / (2 * n - shared) as f64;
    pairs
        .iter()
        .map(|p| Ok((p.jaccard()? - truth).abs() / truth))
        .collect()
}

/// Mean and standard deviation of `|t_hat - t| / t` per method and
/// cardinality, without collision correction. Rows are ordered by
/// cardinality, then method.
pub fn run_similarity_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.trials == 0 {
        return Err(Error::ParamRange {
            name: "trials",
            value: 0,
            min: 1,
            max: u64::MAX,
        });
    }
    if !(config.true_jaccard > 0.0 && config.true_jaccard <= 1.0) {
        return Err(Error::Infeasible(format!(
            "true Jaccard index {} not in (0, 1]",
            config.true_jaccard
        )));
    }
    for &n in &config.cardinalities {
        if n == 0 || n > config.max_items {
            return Err(Error::InfeasibleCardinality {
                n,
                max: config.max_items,
            });
        }
        if shared_items(n, config.true_jaccard) == 0 {
            return Err(Error::Infeasible(format!(
                "cardinality {n} too small for Jaccard index {}",
                config.true_jaccard
            )));
        }
    }

    let mut rows = Vec::new();
    for &n in &config.cardinalities {
        let shared = shared_items(n, config.true_jaccard);
        let per_trial = (0..config.trials)
            .into_par_iter()
            .map(|i| {
                sweep_trial(
                    &config.methods,
                    n,
                    shared,
                    config.seed.wrapping_add(i as u64),
                )
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        for (k, method) in config.methods.iter().enumerate() {
            let errors: Vec<f64> = per_trial.iter().map(|t| t[k]).collect();
            let (mean, stddev) = mean_and_stddev(&errors);
            rows.push(SweepRow {
                method: method.to_string(),
                cardinality: n,
                trials: config.trials,
                mean_rel_error: mean,
                stddev_rel_error: stddev,
            });
        }
    }
    Ok(rows)
}

/// Header `method,cardinality,trials,mean_rel_error,stddev_rel_error`, one row per line.
pub fn write_sweep_csv<W: io::Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "method",
            "cardinality",
            "trials",
            "mean_rel_error",
            "stddev_rel_error",
        ])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollisionTrialSummary {
    pub trials: usize,
    pub n: u64,
    pub m: u64,
    pub mean_collisions: f64,
    pub sample_variance: f64,
    /// Standard error of `sample_variance`, from the fourth central moment.
    pub variance_std_error: f64,
    pub expected_exact: f64,
    pub mean_bound: f64,
    pub var_bound: f64,
    pub mean_within_bound: bool,
    pub mean_matches_exact: bool,
    pub variance_within_bound: bool,
}

impl CollisionTrialSummary {
    pub fn std_error(&self) -> f64 {
        (self.sample_variance / self.trials as f64).sqrt()
    }

    /// Mean below the expectation bound and within three standard errors of
    /// the exact model.
    pub fn passed(&self) -> bool {
        self.mean_within_bound && self.mean_matches_exact
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.serialize(self)?;
        w.flush()?;
        Ok(())
    }
}

/// Colliding buckets between sketches of the disjoint sets
/// `[0, n)` and `[n, n + m)`.
fn count_collisions(params: SketchParams, n: u64, m: u64) -> u64 {
    let mut a = HmhSketch::new(params);
    let mut b = HmhSketch::new(params);
    for item in 0..n {
        a.insert(&item.to_le_bytes());
    }
    for item in n..n + m {
        b.insert(&item.to_le_bytes());
    }
    a.registers()
        .iter()
        .zip(b.registers())
        .filter(|(&x, &y)| x != 0 && x == y)
        .count() as u64
}

/// Sketches `trials` disjoint pairs of sizes `n` and `m` and compares the
/// collision counts with the exact expectation and the two bounds.
pub fn run_collision_trials(
    params: SketchParams,
    n: u64,
    m: u64,
    trials: usize,
    seed: u64,
) -> Result<CollisionTrialSummary> {
    if trials < 2 {
        return Err(Error::ParamRange {
            name: "trials",
            value: trials as u64,
            min: 2,
            max: u64::MAX,
        });
    }
    let counts: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| count_collisions(params.seeded(seed.wrapping_add(i as u64)), n, m) as f64)
        .collect();

    let k = trials as f64;
    let mean = counts.iter().sum::<f64>() / k;
    let m2 = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / k;
    let m4 = counts.iter().map(|c| (c - mean).powi(4)).sum::<f64>() / k;
    let sample_variance = m2 * k / (k - 1.0);
    let var_of_var = ((m4 - m2 * m2 * (k - 3.0) / (k - 1.0)) / k).max(0.0);

    let (big, small) = (n.max(m) as f64, n.min(m) as f64);
    let expected_exact = expected_collisions_exact(big, small, &params);
    let mean_bound = collision_bound(big, &params);
    let var_bound = variance_bound(expected_exact);
    let std_error = (sample_variance / k).sqrt();
    let variance_std_error = var_of_var.sqrt();
    Ok(CollisionTrialSummary {
        trials,
        n,
        m,
        mean_collisions: mean,
        sample_variance,
        variance_std_error,
        expected_exact,
        mean_bound,
        var_bound,
        mean_within_bound: mean <= mean_bound,
        mean_matches_exact: (mean - expected_exact).abs() <= 3.0 * std_error,
        variance_within_bound: sample_variance <= var_bound + 3.0 * variance_std_error,
    })
}
