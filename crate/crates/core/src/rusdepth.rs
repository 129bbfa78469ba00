//! Expected measurement depth of massively parallel RUS rotations.
//!
//! The model: `parallel` teleportations start together and each round
//! re-tosses the failures, so the depth of one batch is
//! `X = max(parallel geometric(1/2))` with CDF `(1 - 2^-k)^parallel`.
//! A circuit of `stages` sequential batches has depth `Y = X_1 + ... +
//! X_stages`, and `copies` circuits running side by side finish at
//! `Z = max(Y_1, ..., Y_copies)`. Both an exact probability-convolution
//! oracle and a seeded Monte Carlo estimator are provided; the two are
//! cross-checked in the tests.
//!
//! Depths are unbounded; distributions are truncated numerically at a
//! configurable support with the reported tail kept below `1e-12`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Identifier of the Monte Carlo generator, recorded in outputs so runs
/// are reproducible across platforms.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Default truncation depth for the per-batch distribution.
pub const DEFAULT_TRUNCATION: usize = 200;

/// Maximum acceptable truncated tail mass.
pub const TAIL_BOUND: f64 = 1e-12;

/// Probability that `parallel` simultaneous RUS rotations all succeed
/// within `k` rounds: `(1 - 2^-k)^parallel`.
pub fn depth_cdf_parallel(parallel: u32, k: u32) -> f64 {
    (1.0 - 0.5f64.powi(k as i32)).powi(parallel as i32)
}

/// A truncated distribution over depths `offset..offset + pmf.len()`.
#[derive(Debug, Clone, Serialize)]
pub struct DepthDistribution {
    /// `pmf[i]` is the probability of depth `offset + i`.
    pub pmf: Vec<f64>,
    /// Smallest depth with support (the number of summed stages).
    pub offset: usize,
    /// Truncated probability mass beyond the stored support.
    pub tail: f64,
}

impl DepthDistribution {
    /// Depth of one batch of `parallel` simultaneous RUS rotations,
    /// truncated at `truncation` rounds.
    pub fn parallel_batch(parallel: u32, truncation: usize) -> Result<Self> {
        if parallel == 0 {
            return Err(Error::invalid("parallel count must be at least 1"));
        }
        if truncation < 1 {
            return Err(Error::invalid("truncation must be at least 1"));
        }
        let mut pmf = Vec::with_capacity(truncation);
        let mut previous = 0.0;
        for k in 1..=truncation {
            let cdf = depth_cdf_parallel(parallel, k as u32);
            pmf.push(cdf - previous);
            previous = cdf;
        }
        Ok(Self { pmf, offset: 1, tail: 1.0 - previous })
    }

    /// Distribution of the sum of `stages` independent copies.
    pub fn convolve_stages(&self, stages: u32) -> Result<Self> {
        if stages == 0 {
            return Err(Error::invalid("stages must be at least 1"));
        }
        let mut result = self.clone();
        for _ in 1..stages {
            result = result.convolve_with(self);
        }
        Ok(result)
    }

    fn convolve_with(&self, other: &Self) -> Self {
        let mut pmf = vec![0.0; self.pmf.len() + other.pmf.len() - 1];
        for (i, a) in self.pmf.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.pmf.iter().enumerate() {
                pmf[i + j] += a * b;
            }
        }
        // Mass paired with a truncated partner is itself unaccounted for.
        let tail = 1.0 - pmf.iter().sum::<f64>();
        Self { pmf, offset: self.offset + other.offset, tail }
    }

    /// Distribution of the maximum of `copies` independent copies.
    pub fn max_of(&self, copies: u32) -> Result<Self> {
        if copies == 0 {
            return Err(Error::invalid("copies must be at least 1"));
        }
        let mut cdf = Vec::with_capacity(self.pmf.len());
        let mut acc = 0.0;
        for p in &self.pmf {
            acc += p;
            cdf.push(acc.min(1.0).powi(copies as i32));
        }
        let mut pmf = Vec::with_capacity(cdf.len());
        let mut previous = 0.0;
        for c in &cdf {
            pmf.push(c - previous);
            previous = *c;
        }
        Ok(Self { pmf, offset: self.offset, tail: 1.0 - previous })
    }

    /// Expected depth, `sum_k k * pmf[k]` plus nothing for the tail (the
    /// caller checks the tail bound first).
    pub fn expected(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(i, p)| (self.offset + i) as f64 * p)
            .sum()
    }
}

/// Exact expected depth `E[Z]` via the convolution oracle, extending the
/// truncated support until the tail bound is met rather than returning a
/// silently clipped value.
pub fn exact_expected_max(parallel: u32, stages: u32, copies: u32) -> Result<f64> {
    exact_expected_max_with(parallel, stages, copies, DEFAULT_TRUNCATION)
}

pub fn exact_expected_max_with(
    parallel: u32,
    stages: u32,
    copies: u32,
    truncation: usize,
) -> Result<f64> {
    let mut support = truncation.max(8);
    loop {
        let batch = DepthDistribution::parallel_batch(parallel, support)?;
        let sum = batch.convolve_stages(stages)?;
        let max = sum.max_of(copies)?;
        // The tail contributes at least `tail * depth`; demand it negligible.
        if max.tail.abs() < TAIL_BOUND {
            return Ok(max.expected());
        }
        support *= 2;
        if support > 1 << 20 {
            return Err(Error::invalid(format!(
                "tail bound {TAIL_BOUND} unreachable (residual {})",
                max.tail
            )));
        }
    }
}

/// Result of a Monte Carlo depth estimate.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub rng: &'static str,
}

/// Monte Carlo estimate of `E[Z]` with its standard error. Each sample
/// draws its own generator stream from `(seed, sample index)`, so results
/// are reproducible and independent of any parallel scheduling.
pub fn mc_expected_max(
    parallel: u32,
    stages: u32,
    copies: u32,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if parallel == 0 || stages == 0 || copies == 0 {
        return Err(Error::invalid("parallel, stages and copies must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for index in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let z = sample_max_depth(parallel, stages, copies, &mut rng);
        let z = z as f64;
        sum += z;
        sum_sq += z * z;
    }
    let n = samples as f64;
    let mean = sum / n;
    let variance = if samples > 1 { (sum_sq - n * mean * mean) / (n - 1.0) } else { 0.0 };
    let stderr = (variance.max(0.0) / n).sqrt();
    Ok(McEstimate { estimate: mean, stderr, samples, seed, rng: RNG_ALGORITHM })
}

fn sample_max_depth<R: RngCore>(parallel: u32, stages: u32, copies: u32, rng: &mut R) -> u64 {
    let mut max_y = 0u64;
    for _ in 0..copies {
        let mut y = 0u64;
        for _ in 0..stages {
            let mut x = 0u64;
            for _ in 0..parallel {
                x = x.max(sample_geometric(rng));
            }
            y += x;
        }
        max_y = max_y.max(y);
    }
    max_y
}

/// Geometric(1/2) on {1, 2, ...} from the position of the first set bit of
/// uniform words; exact dyadic probabilities, no floating point.
fn sample_geometric<R: RngCore>(rng: &mut R) -> u64 {
    let mut offset = 0u64;
    loop {
        let word = rng.next_u64();
        if word != 0 {
            return offset + u64::from(word.leading_zeros()) + 1;
        }
        offset += 64;
    }
}
