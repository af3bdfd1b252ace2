use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// Two-class matrix data with a planted bilinear signal in the upper-left
/// corner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub rows: usize,
    pub cols: usize,
    /// Side length of the planted square block.
    pub block: usize,
    pub per_class: usize,
    pub margin: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            rows: 200,
            cols: 200,
            block: 20,
            per_class: 500,
            margin: 0.5,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::param("rows and cols must be positive"));
        }
        if self.block == 0 || self.block > self.rows.min(self.cols) {
            return Err(Error::param(format!(
                "block {} must lie in 1..={}",
                self.block,
                self.rows.min(self.cols)
            )));
        }
        if self.per_class == 0 {
            return Err(Error::param("per_class must be at least 1"));
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return Err(Error::param(format!("margin must be positive, got {}", self.margin)));
        }
        Ok(())
    }
}

/// The planted direction pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

/// `v1ᵀ X̄ v2 + 1`, where `X̄` is the upper-left block of the matrix `x`.
pub fn planted_score(x: &DenseTensor, gt: &GroundTruth) -> f64 {
    score_raw(x.data(), x.dims()[1], gt)
}

fn score_raw(data: &[f64], cols: usize, gt: &GroundTruth) -> f64 {
    let mut acc = 0.0;
    for (r, &a) in gt.v1.iter().enumerate() {
        let row = &data[r * cols..r * cols + gt.v2.len()];
        acc += a * row.iter().zip(&gt.v2).map(|(x, b)| x * b).sum::<f64>();
    }
    acc + 1.0
}

/// Generates the two-class dataset.
///
/// Every entry is drawn from N(0, 1). The planted vectors have Uniform[0, 1)
/// entries. A class-0 sample whose score falls below `margin` (class-1:
/// above `−margin`) receives the minimum-norm rank-one correction
/// `c · v1 v2ᵀ / (‖v1‖² ‖v2‖²)` on its block, which moves the score by exactly
/// `c`. Class 0 is labelled +1, class 1 is labelled −1. The concatenated
/// classes are shuffled with the same seeded stream.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> Result<(Dataset, GroundTruth)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let draw_uniform = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..cfg.block).map(|_| rng.random::<f64>()).collect();
            if v.iter().any(|&x| x != 0.0) {
                return v;
            }
        }
    };
    let v1 = draw_uniform(&mut rng);
    let v2 = draw_uniform(&mut rng);
    let gt = GroundTruth { v1, v2 };

    let len = cfg.rows * cfg.cols;
    let mut pairs = Vec::with_capacity(2 * cfg.per_class);
    for (label, lower) in [(1i8, true), (-1i8, false)] {
        for _ in 0..cfg.per_class {
            let mut data: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
            enforce_margin(&mut data, cfg.cols, &gt, cfg.margin, lower)?;
            pairs.push((DenseTensor::new(vec![cfg.rows, cfg.cols], data)?, label));
        }
    }
    pairs.shuffle(&mut rng);
    let (samples, labels) = pairs.into_iter().unzip();
    Ok((Dataset::new(samples, labels)?, gt))
}

// lower = true enforces score ≥ margin, otherwise score ≤ −margin.
fn enforce_margin(
    data: &mut [f64],
    cols: usize,
    gt: &GroundTruth,
    margin: f64,
    lower: bool,
) -> Result<()> {
    let target = if lower { margin } else { -margin };
    let satisfied = |s: f64| if lower { s >= target } else { s <= target };
    let n1: f64 = gt.v1.iter().map(|a| a * a).sum();
    let n2: f64 = gt.v2.iter().map(|a| a * a).sum();
    let scale = 1.0 / (n1 * n2);

    let mut score = score_raw(data, cols, gt);
    let mut nudge = 0.0;
    for _ in 0..64 {
        if satisfied(score) {
            return Ok(());
        }
        // Rounding can leave the corrected score a few ulps short; push the
        // deficit slightly past the target until the check passes.
        let deficit = target - score;
        let c = deficit + nudge * deficit.signum();
        for (r, &a) in gt.v1.iter().enumerate() {
            for (ci, &b) in gt.v2.iter().enumerate() {
                data[r * cols + ci] += c * a * b * scale;
            }
        }
        score = score_raw(data, cols, gt);
        nudge = if nudge == 0.0 {
            f64::EPSILON * target.abs().max(1.0)
        } else {
            nudge * 2.0
        };
    }
    if satisfied(score) {
        Ok(())
    } else {
        Err(Error::Data("failed to enforce synthetic class margin".into()))
    }
}
