//! Block proximal-gradient solver with extrapolation.
//!
//! One outer iteration:
//!
//! 1. Extrapolate every block and the bias: `y = z + β (z − z_prev)`.
//! 2. Pick the base point. Under [`Schedule::Adaptive`] the extrapolated point
//!    is used only if `J(y) ≤ J(z)`; β then grows by `t` (capped at `β_max`),
//!    otherwise β shrinks by `t` and the base point stays at `z`. Under
//!    [`Schedule::Nesterov`] `y` is always used and β follows the FISTA
//!    sequence. Under [`Schedule::None`] the base point is `z`.
//! 3. For each block in order, take a prox-gradient step from the base point
//!    with a freshly computed block Lipschitz constant, using the blocks
//!    already updated in this sweep.
//! 4. Take a gradient step on the bias with step `1 / τ_b`.
//!
//! Runs stop on the relative objective or gradient change, the iteration
//! budget or the wall-clock budget.

mod diagnostics;
mod trace;

pub use diagnostics::{
    diagnose_sufficient_decrease, gap_decay_ratio, rho_hat_from_trace, DecreaseReport,
};
pub use trace::{write_trace_csv, IterTrace, TRACE_CSV_HEADER};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::{
    grad_bias, lipschitz_bias, objective, smooth_loss, BlockLinearization, ExtReal, ModelParams,
    ProblemSpec,
};
use crate::prox::{l0_norm, project_l0, prox_block_step};
use crate::tensor::norm2;

/// Momentum schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Accept/reject extrapolation with multiplicative β updates (APALM⁺).
    Adaptive,
    /// FISTA sequence, no acceptance test (APALM).
    Nesterov,
    /// No extrapolation (BPGD).
    None,
}

impl Schedule {
    /// Command-line name of the algorithm variant.
    pub fn algorithm_name(self) -> &'static str {
        match self {
            Schedule::Adaptive => "apalm+",
            Schedule::Nesterov => "apalm",
            Schedule::None => "bpgd",
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.algorithm_name())
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "apalm+" | "apalm_plus" | "adaptive" => Ok(Schedule::Adaptive),
            "apalm" | "nesterov" => Ok(Schedule::Nesterov),
            "bpgd" | "none" => Ok(Schedule::None),
            other => Err(Error::param(format!(
                "unknown schedule {other:?} (expected apalm+, apalm or bpgd)"
            ))),
        }
    }
}

/// Which function decides whether the extrapolated point is accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationCheck {
    /// Compare full objectives; an infeasible extrapolation is always
    /// rejected.
    FullObjective,
    /// Project the extrapolated blocks onto their ℓ0 balls first, then
    /// compare smooth losses.
    SmoothOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub schedule: Schedule,
    /// Momentum growth/decay factor, > 1.
    pub t: f64,
    pub beta1: f64,
    pub beta_max: f64,
    /// Lipschitz inflation, > 1. Overrides the problem's value during a run.
    pub gamma: f64,
    pub tol_obj: f64,
    pub tol_grad: f64,
    pub max_iters: usize,
    pub max_seconds: f64,
    pub extrapolation_check: ExtrapolationCheck,
    /// Seed for [`init_sparse_gaussian`].
    pub seed: u64,
    /// Record wall-clock time in the trace. When off, `elapsed_seconds` is
    /// written as 0 so traces are byte-reproducible.
    pub record_time: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            schedule: Schedule::Adaptive,
            t: 1.3,
            beta1: 0.6,
            beta_max: 0.9999,
            gamma: 1.5,
            tol_obj: 1e-5,
            tol_grad: 1e-4,
            max_iters: 2000,
            max_seconds: 400.0,
            extrapolation_check: ExtrapolationCheck::FullObjective,
            seed: 0,
            record_time: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 1.0 && self.t.is_finite()) {
            return Err(Error::param(format!("t must exceed 1, got {}", self.t)));
        }
        if !(0.0..1.0).contains(&self.beta_max) {
            return Err(Error::param(format!("beta_max must lie in [0, 1), got {}", self.beta_max)));
        }
        if !(0.0..=self.beta_max).contains(&self.beta1) {
            return Err(Error::param(format!(
                "beta1 must lie in [0, beta_max = {}], got {}",
                self.beta_max, self.beta1
            )));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(Error::param(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if [self.tol_obj, self.tol_grad].iter().any(|&t| t.is_nan() || t <= 0.0) {
            return Err(Error::param("tolerances must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be at least 1"));
        }
        if self.max_seconds.is_nan() || self.max_seconds <= 0.0 {
            return Err(Error::param("max_seconds must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ObjTol,
    GradTol,
    MaxIters,
    MaxSeconds,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::ObjTol => "obj_tol",
            StopReason::GradTol => "grad_tol",
            StopReason::MaxIters => "max_iters",
            StopReason::MaxSeconds => "max_seconds",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub params: ModelParams,
    pub trace: Vec<IterTrace>,
    pub stop_reason: StopReason,
}

impl SolveResult {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    /// Objective at the returned parameters.
    pub fn final_objective(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.objective)
    }
}

/// Gradient of the smooth loss with respect to every block and the bias.
#[derive(Clone, Debug, PartialEq)]
pub struct GradFamily {
    pub blocks: Vec<Vec<f64>>,
    pub bias: f64,
}

impl GradFamily {
    pub fn compute(params: &ModelParams, data: &Dataset, spec: &ProblemSpec) -> Result<Self> {
        let blocks = (0..params.blocks.len())
            .map(|j| Ok(BlockLinearization::new(params, data, j)?.gradient(params, data, spec, j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            blocks,
            bias: grad_bias(params, data)?,
        })
    }

    /// `Σ_j ‖a_j − b_j‖₂ + |a_b − b_b|`.
    pub fn distance(&self, other: &GradFamily) -> f64 {
        family_distance(&self.blocks, self.bias, &other.blocks, other.bias).0
    }
}

// Returns (Σ_j ‖a_j − b_j‖ + |Δbias|, Σ_j ‖a_j − b_j‖² + Δbias²).
fn family_distance(a: &[Vec<f64>], ab: f64, b: &[Vec<f64>], bb: f64) -> (f64, f64) {
    let mut sum = (ab - bb).abs();
    let mut sq = (ab - bb) * (ab - bb);
    for (x, y) in a.iter().zip(b) {
        let d: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
        let n = norm2(&d);
        sum += n;
        sq += n * n;
    }
    (sum, sq)
}

/// Stopping rule on two consecutive trace entries and their smooth
/// gradients. The gradient test is checked first.
pub fn check_stop(
    prev: &IterTrace,
    last: &IterTrace,
    grad_last: &GradFamily,
    grad_prev: &GradFamily,
    n: usize,
    config: &SolverConfig,
) -> Option<StopReason> {
    let n = n as f64;
    if grad_last.distance(grad_prev) / n < config.tol_grad {
        return Some(StopReason::GradTol);
    }
    if (last.objective - prev.objective).abs() / n < config.tol_obj {
        return Some(StopReason::ObjTol);
    }
    None
}

/// One step of the FISTA sequence: returns `(t_{k+1}, β_{k+1})` with
/// `t_{k+1} = (1 + √(1 + 4 t_k²)) / 2` and `β_{k+1} = (t_k − 1) / t_{k+1}`.
pub fn nesterov_beta(t_k: f64) -> (f64, f64) {
    let t_next = (1.0 + (1.0 + 4.0 * t_k * t_k).sqrt()) / 2.0;
    (t_next, (t_k - 1.0) / t_next)
}

/// Random feasible start: each block gets `s_j` uniformly chosen positions
/// filled with standard normal draws; the bias is 0. Uses ChaCha8 seeded
/// from `seed`.
pub fn init_sparse_gaussian(dims: &[usize], sparsity: &[usize], seed: u64) -> Result<ModelParams> {
    if dims.len() != sparsity.len() {
        return Err(Error::shape("one sparsity level per block is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::with_capacity(dims.len());
    for (&d, &s) in dims.iter().zip(sparsity) {
        if s < 1 || s > d {
            return Err(Error::param(format!("sparsity {s} must lie in 1..={d}")));
        }
        let mut positions = index::sample(&mut rng, d, s).into_vec();
        positions.sort_unstable();
        let mut w = vec![0.0; d];
        for i in positions {
            w[i] = rng.sample(StandardNormal);
        }
        blocks.push(w);
    }
    ModelParams::new(blocks, 0.0)
}

fn extrapolate(cur: &ModelParams, prev: &ModelParams, beta: f64) -> ModelParams {
    let blocks = cur
        .blocks
        .iter()
        .zip(&prev.blocks)
        .map(|(c, p)| c.iter().zip(p).map(|(a, b)| a + beta * (a - b)).collect())
        .collect();
    ModelParams {
        blocks,
        bias: cur.bias + beta * (cur.bias - prev.bias),
    }
}

fn project_all(params: &ModelParams, sparsity: &[usize]) -> Result<ModelParams> {
    let blocks = params
        .blocks
        .iter()
        .zip(sparsity)
        .map(|(w, &s)| project_l0(w, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelParams {
        blocks,
        bias: params.bias,
    })
}

/// Runs the solver from `init`.
///
/// `config.gamma` replaces `spec.gamma()` for every Lipschitz constant.
pub fn run(
    spec: &ProblemSpec,
    data: &Dataset,
    init: &ModelParams,
    config: &SolverConfig,
) -> Result<SolveResult> {
    config.validate()?;
    let spec = spec.with_gamma(config.gamma)?;
    init.check_dims(data.feature_dims())?;
    if spec.lambda().len() != init.blocks.len() {
        return Err(Error::shape("problem and parameters have different block counts"));
    }
    if !init.is_feasible(spec.sparsity()) {
        return Err(Error::param("initial point violates the sparsity constraints"));
    }
    let j_init = match objective(init, data, &spec)? {
        ExtReal::Finite(v) if v.is_finite() => v,
        other => return Err(Error::Data(format!("objective at the initial point is {other}"))),
    };

    let start = Instant::now();
    let n = data.len();
    let p = init.blocks.len();
    let tau_bias = lipschitz_bias(data, &spec);

    let mut cur = init.clone();
    let mut prev = init.clone();
    let mut j_cur = j_init;
    let mut beta = match config.schedule {
        Schedule::Adaptive => config.beta1,
        Schedule::Nesterov | Schedule::None => 0.0,
    };
    let mut fista_t = 1.0;
    let mut grad_prev: Option<GradFamily> = None;
    let mut trace: Vec<IterTrace> = Vec::new();
    let mut stop_reason = StopReason::MaxIters;

    for iter in 1..=config.max_iters {
        let beta_used = beta;
        let (base, base_objective, accepted) = match config.schedule {
            Schedule::None => (cur.clone(), ExtReal::Finite(j_cur), false),
            Schedule::Nesterov => {
                let y = extrapolate(&cur, &prev, beta);
                let jy = objective(&y, data, &spec)?;
                let (t_next, b_next) = nesterov_beta(fista_t);
                fista_t = t_next;
                beta = b_next;
                (y, jy, true)
            }
            Schedule::Adaptive => {
                let mut y = extrapolate(&cur, &prev, beta);
                let accept = match config.extrapolation_check {
                    ExtrapolationCheck::FullObjective => {
                        let jy = objective(&y, data, &spec)?;
                        (jy <= ExtReal::Finite(j_cur)).then_some(jy)
                    }
                    ExtrapolationCheck::SmoothOnly => {
                        y = project_all(&y, spec.sparsity())?;
                        let hy = smooth_loss(&y, data, &spec)?;
                        (hy <= j_cur).then_some(ExtReal::Finite(hy))
                    }
                };
                match accept {
                    Some(jy) => {
                        beta = (config.t * beta).min(config.beta_max);
                        (y, jy, true)
                    }
                    None => {
                        beta /= config.t;
                        (cur.clone(), ExtReal::Finite(j_cur), false)
                    }
                }
            }
        };

        let mut next = base.clone();
        let mut min_tau = tau_bias;
        for j in 0..p {
            let lin = BlockLinearization::new(&next, data, j)?;
            let grad = lin.gradient(&next, data, &spec, j);
            let tau = lin.lipschitz(&spec, j);
            min_tau = min_tau.min(tau);
            next.blocks[j] = prox_block_step(&next.blocks[j], &grad, tau, spec.sparsity()[j])?;
        }
        next.bias -= grad_bias(&next, data)? / tau_bias;
        debug_assert!(next.is_feasible(spec.sparsity()), "iterate left the feasible set");

        let (gap, gap_sq) = family_distance(&next.blocks, next.bias, &base.blocks, base.bias);
        let j_next = smooth_loss(&next, data, &spec)?;
        if !j_next.is_finite() {
            return Err(Error::Data(format!("objective became non-finite at iteration {iter}")));
        }
        let grad_next = GradFamily::compute(&next, data, &spec)?;
        let elapsed = start.elapsed().as_secs_f64();

        trace.push(IterTrace {
            iter,
            objective: j_next,
            gap,
            beta: beta_used,
            accepted,
            elapsed_seconds: if config.record_time { elapsed } else { 0.0 },
            base_objective,
            gap_sq,
            min_tau,
            nonzeros: next.blocks.iter().map(|w| l0_norm(w)).collect(),
        });

        prev = std::mem::replace(&mut cur, next);
        j_cur = j_next;

        if let (Some(gp), [.., before, last]) = (&grad_prev, trace.as_slice()) {
            if let Some(reason) = check_stop(before, last, &grad_next, gp, n, config) {
                stop_reason = reason;
                break;
            }
        }
        grad_prev = Some(grad_next);

        if elapsed >= config.max_seconds {
            stop_reason = StopReason::MaxSeconds;
            break;
        }
    }

    Ok(SolveResult {
        params: cur,
        trace,
        stop_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grad_block;
    use crate::tensor::DenseTensor;

    fn entry(iter: usize, objective: f64) -> IterTrace {
        IterTrace {
            iter,
            objective,
            gap: 0.0,
            beta: 0.0,
            accepted: false,
            elapsed_seconds: 0.0,
            base_objective: ExtReal::Finite(objective),
            gap_sq: 0.0,
            min_tau: 1.0,
            nonzeros: vec![],
        }
    }

    fn family(v: f64) -> GradFamily {
        GradFamily {
            blocks: vec![vec![v, 0.0], vec![0.0]],
            bias: 0.0,
        }
    }

    #[test]
    fn schedule_names() {
        for s in [Schedule::Adaptive, Schedule::Nesterov, Schedule::None] {
            assert_eq!(s.algorithm_name().parse::<Schedule>().unwrap(), s);
        }
        assert!(matches!("sgd".parse::<Schedule>(), Err(Error::Param(_))));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = [
            SolverConfig { t: 1.0, ..Default::default() },
            SolverConfig { beta_max: 1.0, ..Default::default() },
            SolverConfig { beta1: 0.95, beta_max: 0.9, ..Default::default() },
            SolverConfig { gamma: 1.0, ..Default::default() },
            SolverConfig { tol_obj: 0.0, ..Default::default() },
            SolverConfig { max_iters: 0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Param(_))), "{cfg:?}");
        }
    }

    #[test]
    fn stop_rule_examples() {
        let cfg = SolverConfig::default();
        // Equal objectives fire obj_tol when gradients differ.
        assert_eq!(
            check_stop(&entry(1, 3.0), &entry(2, 3.0), &family(1.0), &family(0.0), 10, &cfg),
            Some(StopReason::ObjTol)
        );
        // Identical gradients fire grad_tol.
        assert_eq!(
            check_stop(&entry(1, 9.0), &entry(2, 3.0), &family(1.0), &family(1.0), 10, &cfg),
            Some(StopReason::GradTol)
        );
        // |ΔJ|/n = 2e-5 against 1e-5, large gradient change: keep going.
        assert_eq!(
            check_stop(&entry(1, 1.0), &entry(2, 1.0 + 2e-4), &family(5.0), &family(0.0), 10, &cfg),
            None
        );
    }

    #[test]
    fn fista_sequence() {
        let (t2, b2) = nesterov_beta(1.0);
        assert!((t2 - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(b2, 0.0);
        let (t, b) = nesterov_beta(2.0);
        assert!((t - (1.0 + 17f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((b - 1.0 / t).abs() < 1e-15);
        assert!((t - 2.5615528128088303).abs() < 1e-12);
        assert!((b - 0.3903882032022076).abs() < 1e-12);

        let mut tk = 1.0;
        let mut last = 0.0;
        for _ in 0..500 {
            let (tn, bn) = nesterov_beta(tk);
            assert!(bn >= last && bn < 1.0);
            last = bn;
            tk = tn;
        }
    }

    #[test]
    fn init_is_feasible_and_seeded() {
        let a = init_sparse_gaussian(&[10, 4], &[3, 4], 5).unwrap();
        assert_eq!(a.dims(), vec![10, 4]);
        assert_eq!(crate::prox::l0_norm(&a.blocks[0]), 3);
        assert_eq!(crate::prox::l0_norm(&a.blocks[1]), 4);
        assert_eq!(a.bias, 0.0);
        assert_eq!(a, init_sparse_gaussian(&[10, 4], &[3, 4], 5).unwrap());
        assert_ne!(a, init_sparse_gaussian(&[10, 4], &[3, 4], 6).unwrap());
        assert!(matches!(init_sparse_gaussian(&[3], &[4], 0), Err(Error::Param(_))));
    }

    fn vector_problem() -> (Dataset, ProblemSpec) {
        let xs = [[1.0, -0.5, 2.0], [0.3, 0.8, -1.0], [-1.2, 0.4, 0.1], [0.5, 0.5, 0.5]];
        let samples = xs
            .iter()
            .map(|x| DenseTensor::new(vec![3], x.to_vec()).unwrap())
            .collect();
        let ds = Dataset::new(samples, vec![1, -1, -1, 1]).unwrap();
        let spec = ProblemSpec::new(vec![0.0], vec![2], 1.5, &[3]).unwrap();
        (ds, spec)
    }

    #[test]
    fn single_step_matches_hand_computation() {
        let (ds, spec) = vector_problem();
        let init = ModelParams::new(vec![vec![0.4, 0.0, -0.3]], 0.2).unwrap();
        let cfg = SolverConfig {
            beta1: 0.0,
            beta_max: 0.0,
            max_iters: 1,
            record_time: false,
            ..Default::default()
        };
        let res = run(&spec, &ds, &init, &cfg).unwrap();

        // Block step from the finite-difference-checked gradient, then the
        // bias step at the updated block.
        let g = grad_block(&init, &ds, &spec, 0).unwrap();
        let xs: Vec<&[f64]> = ds.samples().iter().map(|s| s.data()).collect();
        let curvature: f64 = xs.iter().map(|x| (norm2(x) + 1.0).powi(2)).sum();
        let tau = 1.5 * (std::f64::consts::SQRT_2 * curvature + 0.0);
        let u: Vec<f64> = init.blocks[0].iter().zip(&g).map(|(w, gi)| w - gi / tau).collect();
        let w1 = project_l0(&u, 2).unwrap();
        let after_block = ModelParams::new(vec![w1.clone()], init.bias).unwrap();
        let b1 = init.bias - grad_bias(&after_block, &ds).unwrap() / (1.5 * 4.0 / 4.0);

        assert_eq!(res.params.blocks[0], w1);
        assert_eq!(res.params.bias, b1);
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.stop_reason, StopReason::MaxIters);
        assert!(res.trace[0].objective <= j_of(&init, &ds, &spec));
    }

    fn j_of(p: &ModelParams, ds: &Dataset, spec: &ProblemSpec) -> f64 {
        smooth_loss(p, ds, spec).unwrap()
    }

    #[test]
    fn stationary_start_stops_on_gradient_at_iteration_two() {
        let samples = (0..6)
            .map(|i| DenseTensor::new(vec![2, 3], (0..6).map(|j| ((i * 7 + j * 3) % 5) as f64 - 2.0).collect()).unwrap())
            .collect();
        let ds = Dataset::new(samples, vec![1, -1, 1, -1, 1, -1]).unwrap();
        let spec = ProblemSpec::new(vec![2e-4; 2], vec![1, 1], 1.5, &[2, 3]).unwrap();
        let init = ModelParams::zeros(&[2, 3]);
        for schedule in [Schedule::Adaptive, Schedule::Nesterov, Schedule::None] {
            let cfg = SolverConfig { schedule, ..Default::default() };
            let res = run(&spec, &ds, &init, &cfg).unwrap();
            assert_eq!(res.stop_reason, StopReason::GradTol, "{schedule}");
            assert_eq!(res.trace.len(), 2);
            assert_eq!(res.params, init);
            assert!(res.trace.iter().all(|t| t.gap == 0.0));
        }
    }

    #[test]
    fn rejects_bad_starts() {
        let (ds, spec) = vector_problem();
        let dense = ModelParams::new(vec![vec![1.0, 1.0, 1.0]], 0.0).unwrap();
        assert!(matches!(run(&spec, &ds, &dense, &SolverConfig::default()), Err(Error::Param(_))));
        let wrong = ModelParams::zeros(&[4]);
        assert!(matches!(run(&spec, &ds, &wrong, &SolverConfig::default()), Err(Error::Shape(_))));
    }

    #[test]
    fn adaptive_beta_moves_by_exact_factors() {
        let (ds, spec) = vector_problem();
        let init = init_sparse_gaussian(&[3], &[2], 3).unwrap();
        let cfg = SolverConfig {
            max_iters: 60,
            tol_obj: 1e-300,
            tol_grad: 1e-300,
            ..Default::default()
        };
        let res = run(&spec, &ds, &init, &cfg).unwrap();
        let tr = &res.trace;
        assert_eq!(tr[0].beta, cfg.beta1);
        for w in tr.windows(2) {
            let expected = if w[0].accepted {
                (cfg.t * w[0].beta).min(cfg.beta_max)
            } else {
                w[0].beta / cfg.t
            };
            assert_eq!(w[1].beta, expected);
            assert!((0.0..=cfg.beta_max).contains(&w[1].beta));
        }
        assert!(tr[0].accepted, "first extrapolation is the identity and must be accepted");
    }

    #[test]
    fn smooth_only_check_stays_monotone() {
        let (ds, spec) = vector_problem();
        let init = init_sparse_gaussian(&[3], &[2], 11).unwrap();
        let cfg = SolverConfig {
            extrapolation_check: ExtrapolationCheck::SmoothOnly,
            max_iters: 200,
            ..Default::default()
        };
        let res = run(&spec, &ds, &init, &cfg).unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-10);
        }
        assert!(res.params.is_feasible(spec.sparsity()));
    }
}
