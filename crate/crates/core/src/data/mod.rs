//! Labelled tensor datasets: construction, normalization, stratified
//! splitting, synthetic generation and on-disk formats.

mod format;
mod synthetic;

pub use format::{
    load, load_model, read_dataset, read_model, save, save_model, write_dataset, write_model,
    DATASET_MAGIC, FORMAT_VERSION, MODEL_MAGIC,
};
pub use synthetic::{generate_synthetic, planted_score, GroundTruth, SyntheticConfig};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// Samples of identical shape with ±1 labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    samples: Vec<DenseTensor>,
    labels: Vec<i8>,
    feature_dims: Vec<usize>,
}

impl Dataset {
    pub fn new(samples: Vec<DenseTensor>, labels: Vec<i8>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Data("dataset must contain at least one sample".into()));
        }
        if samples.len() != labels.len() {
            return Err(Error::shape(format!(
                "{} samples but {} labels",
                samples.len(),
                labels.len()
            )));
        }
        if let Some(pos) = labels.iter().position(|&y| y != 1 && y != -1) {
            return Err(Error::Data(format!(
                "label {} at position {pos} is not +1 or -1",
                labels[pos]
            )));
        }
        let feature_dims = samples[0].dims().to_vec();
        if feature_dims.is_empty() {
            return Err(Error::shape("samples must have order at least 1"));
        }
        if let Some(pos) = samples.iter().position(|s| s.dims() != feature_dims.as_slice()) {
            return Err(Error::shape(format!(
                "sample {pos} has dims {:?}, expected {:?}",
                samples[pos].dims(),
                feature_dims
            )));
        }
        Ok(Self {
            samples,
            labels,
            feature_dims,
        })
    }

    /// Builds a dataset from {0, 1} labels, mapping 1 → +1 and 0 → −1.
    pub fn from_binary_labels(samples: Vec<DenseTensor>, labels: &[u8]) -> Result<Self> {
        let mapped = labels
            .iter()
            .enumerate()
            .map(|(i, &y)| match y {
                0 => Ok(-1),
                1 => Ok(1),
                other => Err(Error::Data(format!(
                    "label {other} at position {i} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(samples, mapped)
    }

    pub fn samples(&self) -> &[DenseTensor] {
        &self.samples
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn feature_dims(&self) -> &[usize] {
        &self.feature_dims
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of (+1, −1) labels.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&y| y == 1).count();
        (pos, self.labels.len() - pos)
    }

    /// New dataset holding the given samples, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let samples = indices
            .iter()
            .map(|&i| {
                self.samples.get(i).cloned().ok_or(Error::Index {
                    index: i,
                    len: self.samples.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Self::new(samples, labels)
    }
}

/// Per-coordinate affine map onto [−1, 1], fitted on one dataset and
/// reusable on held-out data.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalizer {
    min: Vec<f64>,
    max: Vec<f64>,
    dims: Vec<usize>,
}

impl Normalizer {
    pub fn fit(ds: &Dataset) -> Self {
        let len = ds.samples[0].len();
        let mut min = vec![f64::INFINITY; len];
        let mut max = vec![f64::NEG_INFINITY; len];
        for s in &ds.samples {
            for ((lo, hi), &x) in min.iter_mut().zip(max.iter_mut()).zip(s.data()) {
                *lo = lo.min(x);
                *hi = hi.max(x);
            }
        }
        Self {
            min,
            max,
            dims: ds.feature_dims.clone(),
        }
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    /// Maps each coordinate with `x ↦ 2(x − min)/(max − min) − 1`.
    /// Constant coordinates map to 0.
    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        if ds.feature_dims != self.dims {
            return Err(Error::shape(format!(
                "normalizer fitted on dims {:?}, dataset has {:?}",
                self.dims, ds.feature_dims
            )));
        }
        let samples = ds
            .samples
            .iter()
            .map(|s| {
                let data = s
                    .data()
                    .iter()
                    .zip(self.min.iter().zip(&self.max))
                    .map(|(&x, (&lo, &hi))| {
                        let range = hi - lo;
                        if range > 0.0 {
                            (2.0 * (x - lo) / range - 1.0).clamp(-1.0, 1.0)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                DenseTensor::new(s.dims().to_vec(), data)
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(samples, ds.labels.clone())
    }
}

/// Scales every coordinate to [−1, 1] across the samples of `ds`. Returns the
/// scaled data and the fitted transform for held-out sets.
pub fn normalize_per_feature(ds: &Dataset) -> Result<(Dataset, Normalizer)> {
    let norm = Normalizer::fit(ds);
    let scaled = norm.apply(ds)?;
    Ok((scaled, norm))
}

/// Seeded, label-stratified train/test split.
///
/// The training side receives `round(fraction · n)` samples, apportioned to
/// the classes by largest remainder (ties favour the +1 class) and clamped so
/// each class keeps at least one sample on each side. Each class is shuffled
/// before it is cut, and both halves are shuffled afterwards so classes
/// interleave.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::param(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let classes: Vec<Vec<usize>> = [1i8, -1]
        .iter()
        .map(|&c| (0..ds.len()).filter(|&i| ds.labels[i] == c).collect())
        .collect();
    for (c, idx) in [1i8, -1].iter().zip(&classes) {
        if idx.len() < 2 {
            return Err(Error::param(format!(
                "class {c:+} has {} sample(s); stratified split needs at least 2",
                idx.len()
            )));
        }
    }

    let total = (train_fraction * ds.len() as f64).round() as usize;
    let quotas: Vec<f64> = classes.iter().map(|c| train_fraction * c.len() as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut by_remainder: Vec<usize> = (0..classes.len()).collect();
    by_remainder.sort_by(|&a, &b| (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor())));
    let mut left = total.saturating_sub(counts.iter().sum());
    for &c in by_remainder.iter().cycle().take(2 * classes.len()) {
        if left == 0 {
            break;
        }
        if counts[c] < classes[c].len() {
            counts[c] += 1;
            left -= 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (mut idx, count) in classes.into_iter().zip(counts) {
        idx.shuffle(&mut rng);
        let n_train = count.clamp(1, idx.len() - 1);
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.shuffle(&mut rng);
    test.shuffle(&mut rng);
    Ok((ds.subset(&train)?, ds.subset(&test)?))
}
