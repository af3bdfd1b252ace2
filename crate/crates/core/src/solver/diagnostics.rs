//! Trace-level checks of the descent guarantees.

use super::IterTrace;
use crate::model::ExtReal;

/// Outcome of [`diagnose_sufficient_decrease`].
#[derive(Clone, Debug, PartialEq)]
pub struct DecreaseReport {
    pub rho_hat: f64,
    /// Iterations whose base point was feasible, so the inequality applies.
    pub checked: usize,
    pub violations: usize,
    /// Largest `J(z_{k+1}) − (J(c_k) − ρ̂ ‖z_{k+1} − c_k‖²)`, clamped at 0.
    pub max_violation: f64,
}

impl DecreaseReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Violations above this are counted.
pub const DECREASE_TOLERANCE: f64 = 1e-9;

/// `ρ̂ = (γ − 1)/γ · min τ / 2`, the smallest step constant over the whole
/// trace. Each block step with constant `τ ≥ γ L` decreases the smooth loss
/// by at least `(τ − L)/2 ≥ (γ − 1)/γ · τ/2` times its squared length.
pub fn rho_hat_from_trace(trace: &[IterTrace], gamma: f64) -> f64 {
    let min_tau = trace.iter().map(|t| t.min_tau).fold(f64::INFINITY, f64::min);
    (gamma - 1.0) / gamma * min_tau / 2.0
}

/// Checks `J(z_{k+1}) ≤ J(c_k) − ρ̂ ‖z_{k+1} − c_k‖²` on every iteration whose
/// base point `c_k` is feasible. Iterations with an infeasible base (possible
/// only without the acceptance test) satisfy it trivially.
pub fn diagnose_sufficient_decrease(trace: &[IterTrace], rho_hat: f64) -> DecreaseReport {
    let mut checked = 0;
    let mut violations = 0;
    let mut max_violation: f64 = 0.0;
    for t in trace {
        let ExtReal::Finite(base) = t.base_objective else {
            continue;
        };
        checked += 1;
        let excess = t.objective - (base - rho_hat * t.gap_sq);
        max_violation = max_violation.max(excess);
        if excess > DECREASE_TOLERANCE {
            violations += 1;
        }
    }
    DecreaseReport {
        rho_hat,
        checked,
        violations,
        max_violation,
    }
}

/// Mean gap over the last 10% of iterations divided by the mean over the
/// first 10% (at least one iteration each). `None` for traces shorter than
/// two iterations or when the early gaps are all zero.
pub fn gap_decay_ratio(trace: &[IterTrace]) -> Option<f64> {
    if trace.len() < 2 {
        return None;
    }
    let k = (trace.len() / 10).max(1);
    let mean = |s: &[IterTrace]| s.iter().map(|t| t.gap).sum::<f64>() / s.len() as f64;
    let first = mean(&trace[..k]);
    let last = mean(&trace[trace.len() - k..]);
    (first > 0.0).then(|| last / first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(objective: f64, base: ExtReal, gap: f64, gap_sq: f64) -> IterTrace {
        IterTrace {
            iter: 0,
            objective,
            gap,
            beta: 0.0,
            accepted: false,
            elapsed_seconds: 0.0,
            base_objective: base,
            gap_sq,
            min_tau: 4.0,
            nonzeros: vec![],
        }
    }

    #[test]
    fn rho_hat_formula() {
        let tr = vec![entry(1.0, ExtReal::Finite(1.0), 0.0, 0.0)];
        assert_eq!(rho_hat_from_trace(&tr, 1.5), 0.5 / 1.5 * 2.0);
    }

    #[test]
    fn stationary_trace_holds_with_equality() {
        let tr = vec![entry(2.0, ExtReal::Finite(2.0), 0.0, 0.0); 5];
        let r = diagnose_sufficient_decrease(&tr, 0.7);
        assert!(r.passed());
        assert_eq!(r.checked, 5);
        assert_eq!(r.max_violation, 0.0);
    }

    #[test]
    fn violation_detected_and_infeasible_base_skipped() {
        let tr = vec![
            entry(1.0, ExtReal::Finite(1.05), 0.5, 0.25),
            entry(1.0, ExtReal::PosInf, 3.0, 9.0),
        ];
        let r = diagnose_sufficient_decrease(&tr, 1.0);
        assert_eq!(r.checked, 1);
        assert_eq!(r.violations, 1);
        assert!((r.max_violation - 0.2).abs() < 1e-12);
    }

    #[test]
    fn decay_ratio() {
        let tr: Vec<IterTrace> = (0..20)
            .map(|i| entry(0.0, ExtReal::Finite(0.0), 1.0 / (1 << i) as f64, 0.0))
            .collect();
        let r = gap_decay_ratio(&tr).unwrap();
        let expected = ((1.0 / (1 << 18) as f64) + (1.0 / (1 << 19) as f64)) / (1.0 + 0.5);
        assert!((r - expected).abs() < 1e-18);
        assert_eq!(gap_decay_ratio(&tr[..1]), None);
        let flat = vec![entry(0.0, ExtReal::Finite(0.0), 0.0, 0.0); 4];
        assert_eq!(gap_decay_ratio(&flat), None);
    }
}
