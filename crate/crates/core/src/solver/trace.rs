use std::io::Write;

use crate::error::Result;
use crate::model::ExtReal;

pub const TRACE_CSV_HEADER: &str = "iter,objective,gap,beta,accepted,elapsed_seconds";

/// Record of one outer iteration.
///
/// `objective` is `J` at the new iterate and `base_objective` is `J` at the
/// base point the block steps started from (the extrapolated point when it
/// was used). `gap` is the distance between the two, measured as the sum of
/// per-block Euclidean norms plus the absolute bias change; `gap_sq` is the
/// squared Euclidean distance over all coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct IterTrace {
    pub iter: usize,
    pub objective: f64,
    pub gap: f64,
    /// Momentum used for this iteration's extrapolation.
    pub beta: f64,
    /// Whether the extrapolated point became the base point.
    pub accepted: bool,
    pub elapsed_seconds: f64,
    pub base_objective: ExtReal,
    pub gap_sq: f64,
    /// Smallest step constant used in this iteration, bias included.
    pub min_tau: f64,
    /// `‖w_j‖₀` of each block at the new iterate.
    pub nonzeros: Vec<usize>,
}

/// Writes the trace as CSV: one row per iteration, floats with 17
/// significant digits, `accepted` as 0/1.
pub fn write_trace_csv<W: Write>(trace: &[IterTrace], mut w: W) -> Result<()> {
    writeln!(w, "{TRACE_CSV_HEADER}")?;
    for t in trace {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            t.iter,
            t.objective,
            t.gap,
            t.beta,
            u8::from(t.accepted),
            t.elapsed_seconds
        )?;
    }
    w.flush()?;
    Ok(())
}
