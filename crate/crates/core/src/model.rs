//! The ℓ0-constrained multilinear logistic objective.
//!
//! For samples `(X_s, y_s)` with `y_s ∈ {−1, +1}` the smooth part is
//!
//! ```text
//! H(W, b) = Σ_s log(1 + exp(−y_s f_s)) + Σ_j (λ_j / 2) ‖w_j‖²,   f_s = X_s ×₀ w₀ … ×ₚ₋₁ wₚ₋₁ + b
//! ```
//!
//! and the full objective `J` adds the indicator of `‖w_j‖₀ ≤ s_j` for every
//! block, so it is `+∞` off the feasible set.
//!
//! All per-sample sums run in sample order, so results are reproducible.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::prox::l0_norm;
use crate::tensor::{contract_all_but, contract_full, dot, norm2, DenseTensor};

/// Extended real: a finite value or `+∞`.
///
/// Only comparison is defined; there is deliberately no arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInf => None,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::PosInf) => Some(Ordering::Less),
            (ExtReal::PosInf, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::PosInf, ExtReal::PosInf) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => f.write_str("+inf"),
        }
    }
}

/// Weight vectors, one per tensor mode, plus a scalar bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub blocks: Vec<Vec<f64>>,
    pub bias: f64,
}

impl ModelParams {
    pub fn new(blocks: Vec<Vec<f64>>, bias: f64) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::shape("every block must be a nonempty vector"));
        }
        if !bias.is_finite() || blocks.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Data("model parameters must be finite".into()));
        }
        Ok(Self { blocks, bias })
    }

    pub fn zeros(dims: &[usize]) -> Self {
        Self {
            blocks: dims.iter().map(|&d| vec![0.0; d]).collect(),
            bias: 0.0,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// True when every block has at most `sparsity[j]` nonzeros.
    pub fn is_feasible(&self, sparsity: &[usize]) -> bool {
        self.blocks.len() == sparsity.len()
            && self.blocks.iter().zip(sparsity).all(|(b, &s)| l0_norm(b) <= s)
    }

    pub(crate) fn check_dims(&self, dims: &[usize]) -> Result<()> {
        if self.blocks.len() != dims.len() || self.blocks.iter().zip(dims).any(|(b, &d)| b.len() != d)
        {
            return Err(Error::shape(format!(
                "parameter block lengths {:?} do not match data dims {:?}",
                self.dims(),
                dims
            )));
        }
        Ok(())
    }
}

/// Ridge weights, per-block sparsity levels and the Lipschitz inflation
/// factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    lambda: Vec<f64>,
    sparsity: Vec<usize>,
    gamma: f64,
}

impl ProblemSpec {
    /// Requires `1 ≤ s_j ≤ d_j`, `λ_j ≥ 0` and `γ > 1`.
    pub fn new(lambda: Vec<f64>, sparsity: Vec<usize>, gamma: f64, dims: &[usize]) -> Result<Self> {
        if lambda.len() != dims.len() || sparsity.len() != dims.len() {
            return Err(Error::shape(format!(
                "{} ridge weights and {} sparsity levels for {} modes",
                lambda.len(),
                sparsity.len(),
                dims.len()
            )));
        }
        if let Some(l) = lambda.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return Err(Error::param(format!("ridge weight {l} must be finite and ≥ 0")));
        }
        for (j, (&s, &d)) in sparsity.iter().zip(dims).enumerate() {
            if s < 1 || s > d {
                return Err(Error::param(format!(
                    "sparsity {s} of block {j} must lie in 1..={d}"
                )));
            }
        }
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::param(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self {
            lambda,
            sparsity,
            gamma,
        })
    }

    /// Sparsity `s_j = ⌈fraction · d_j⌉` for each block.
    pub fn from_fraction(lambda: Vec<f64>, fraction: f64, gamma: f64, dims: &[usize]) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::param(format!(
                "sparsity fraction must lie in (0, 1], got {fraction} (would give s < 1)"
            )));
        }
        let sparsity = dims
            .iter()
            .map(|&d| ((fraction * d as f64).ceil() as usize).min(d))
            .collect();
        Self::new(lambda, sparsity, gamma, dims)
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn sparsity(&self) -> &[usize] {
        &self.sparsity
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::param(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self {
            gamma,
            ..self.clone()
        })
    }

    fn check(&self, params: &ModelParams, data: &Dataset) -> Result<()> {
        params.check_dims(data.feature_dims())?;
        if self.lambda.len() != params.blocks.len() {
            return Err(Error::shape(format!(
                "problem has {} blocks, parameters have {}",
                self.lambda.len(),
                params.blocks.len()
            )));
        }
        Ok(())
    }
}

/// `log(1 + exp(−m))` without overflow.
pub(crate) fn logistic_loss(m: f64) -> f64 {
    (-m.abs()).exp().ln_1p() + (-m).max(0.0)
}

/// `1 / (1 + exp(−u))` without overflow.
pub(crate) fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

// d/df log(1 + exp(−y f)) = −y σ(−y f)
fn loss_slope(y: f64, f: f64) -> f64 {
    -y * sigmoid(-y * f)
}

/// Margin `f(x) = x ×₀ w₀ … + b`.
pub fn predict(params: &ModelParams, x: &DenseTensor) -> Result<f64> {
    params.check_dims(x.dims())?;
    Ok(contract_full(x, &params.blocks)? + params.bias)
}

/// Margins for every sample, in order.
pub fn margins(params: &ModelParams, data: &Dataset) -> Result<Vec<f64>> {
    data.samples().iter().map(|x| predict(params, x)).collect()
}

fn ridge(params: &ModelParams, spec: &ProblemSpec) -> f64 {
    params
        .blocks
        .iter()
        .zip(&spec.lambda)
        .map(|(w, l)| 0.5 * l * dot(w, w))
        .sum()
}

fn loss_from_margins(margins: &[f64], labels: &[i8]) -> f64 {
    margins
        .iter()
        .zip(labels)
        .map(|(&f, &y)| logistic_loss(f64::from(y) * f))
        .sum()
}

/// Smooth part `H`: summed logistic loss plus blockwise ridge.
pub fn smooth_loss(params: &ModelParams, data: &Dataset, spec: &ProblemSpec) -> Result<f64> {
    spec.check(params, data)?;
    let m = margins(params, data)?;
    Ok(loss_from_margins(&m, data.labels()) + ridge(params, spec))
}

/// Full objective `J`: `H` on the feasible set, `+∞` elsewhere.
pub fn objective(params: &ModelParams, data: &Dataset, spec: &ProblemSpec) -> Result<ExtReal> {
    spec.check(params, data)?;
    if !params.is_feasible(&spec.sparsity) {
        return Ok(ExtReal::PosInf);
    }
    smooth_loss(params, data, spec).map(ExtReal::Finite)
}

/// Per-sample linearization of the model around block `j`: the direction
/// `∇_{w_j} f(X_s)` for every sample, which fixes both the block gradient and
/// the block Lipschitz constant.
pub(crate) struct BlockLinearization {
    directions: Vec<Vec<f64>>,
}

impl BlockLinearization {
    pub(crate) fn new(params: &ModelParams, data: &Dataset, j: usize) -> Result<Self> {
        let p = params.blocks.len();
        if j >= p {
            return Err(Error::Index { index: j, len: p });
        }
        params.check_dims(data.feature_dims())?;
        let directions = data
            .samples()
            .iter()
            .map(|x| contract_all_but(x, &params.blocks, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { directions })
    }

    pub(crate) fn gradient(&self, params: &ModelParams, data: &Dataset, spec: &ProblemSpec, j: usize) -> Vec<f64> {
        let w = &params.blocks[j];
        let mut grad = vec![0.0; w.len()];
        for (g, &y) in self.directions.iter().zip(data.labels()) {
            let f = dot(g, w) + params.bias;
            let c = loss_slope(f64::from(y), f);
            for (a, gi) in grad.iter_mut().zip(g) {
                *a += c * gi;
            }
        }
        for (a, wi) in grad.iter_mut().zip(w) {
            *a += spec.lambda[j] * wi;
        }
        grad
    }

    pub(crate) fn lipschitz(&self, spec: &ProblemSpec, j: usize) -> f64 {
        let curvature: f64 = self
            .directions
            .iter()
            .map(|g| (norm2(g) + 1.0).powi(2))
            .sum();
        spec.gamma * (std::f64::consts::SQRT_2 * curvature + spec.lambda[j])
    }
}

/// `∇_{w_j} H`: `Σ_s −y_s σ(−y_s f_s) ∇_{w_j} f(X_s) + λ_j w_j`.
pub fn grad_block(params: &ModelParams, data: &Dataset, spec: &ProblemSpec, j: usize) -> Result<Vec<f64>> {
    spec.check(params, data)?;
    Ok(BlockLinearization::new(params, data, j)?.gradient(params, data, spec, j))
}

/// `∇_b H`: `Σ_s −y_s σ(−y_s f_s)`.
pub fn grad_bias(params: &ModelParams, data: &Dataset) -> Result<f64> {
    let m = margins(params, data)?;
    Ok(m.iter()
        .zip(data.labels())
        .map(|(&f, &y)| loss_slope(f64::from(y), f))
        .sum())
}

/// Block Lipschitz bound `γ (√2 Σ_s (‖∇_{w_j} f(X_s)‖ + 1)² + λ_j)` at the
/// current values of the other blocks.
pub fn lipschitz_block(params: &ModelParams, data: &Dataset, spec: &ProblemSpec, j: usize) -> Result<f64> {
    spec.check(params, data)?;
    Ok(BlockLinearization::new(params, data, j)?.lipschitz(spec, j))
}

/// Bias step constant `γ n / 4`, from `|∂²H/∂b²| ≤ n/4`.
pub fn lipschitz_bias(data: &Dataset, spec: &ProblemSpec) -> f64 {
    spec.gamma * data.len() as f64 / 4.0
}
