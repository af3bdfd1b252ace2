//! Multilinear sparse logistic regression under per-mode ℓ0 constraints.
//!
//! Each sample is a dense order-`p` tensor `X`. The model holds one weight
//! vector per mode plus a scalar bias and predicts the margin
//! `f(X) = X ×₁ w₁ ×₂ w₂ … ×ₚ wₚ + b`. Training minimizes the ridge-penalized
//! logistic loss subject to `‖w_i‖₀ ≤ s_i` for every mode.
//!
//! The solver is a cyclic block proximal-gradient method with an extrapolated
//! base point. Three momentum schedules are available:
//!
//! - [`Schedule::Adaptive`]: the extrapolated point is kept only when it does
//!   not increase the objective; momentum grows on acceptance and shrinks on
//!   rejection (APALM⁺).
//! - [`Schedule::Nesterov`]: the classic FISTA sequence with no acceptance test
//!   (APALM).
//! - [`Schedule::None`]: no momentum; plain block proximal gradient (BPGD).
//!
//! Module map:
//!
//! - [`tensor`]: dense row-major tensors and mode-k contractions.
//! - [`model`]: loss, objective, gradients and block Lipschitz constants.
//! - [`prox`]: hard thresholding (projection onto the ℓ0 ball).
//! - [`solver`]: the main loop, stopping rules, traces and diagnostics.
//! - [`data`]: datasets, synthetic generation, normalization, splitting and
//!   binary file formats.
//! - [`metrics`]: accuracy and ROC AUC.

pub mod data;
pub mod error;
pub mod metrics;
pub mod model;
pub mod prox;
pub mod solver;
pub mod tensor;

pub use data::{Dataset, GroundTruth, Normalizer, SyntheticConfig};
pub use error::{Error, Result};
pub use model::{ExtReal, ModelParams, ProblemSpec};
pub use solver::{
    ExtrapolationCheck, IterTrace, Schedule, SolveResult, SolverConfig, StopReason,
};
pub use tensor::DenseTensor;
