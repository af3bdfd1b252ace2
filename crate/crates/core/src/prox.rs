//! Hard thresholding: Euclidean projection onto `{w : ‖w‖₀ ≤ s}`.

use crate::error::{Error, Result};

/// Number of nonzero entries.
pub fn l0_norm(v: &[f64]) -> usize {
    v.iter().filter(|&&x| x != 0.0).count()
}

/// Keeps the `s` largest-magnitude entries of `v` and zeroes the rest.
///
/// Ties at the cutoff keep the lower index. Surviving entries are copied
/// bitwise. A vector with at most `s` nonzeros is returned unchanged.
pub fn project_l0(v: &[f64], s: usize) -> Result<Vec<f64>> {
    if s < 1 {
        return Err(Error::param("sparsity level must be at least 1"));
    }
    if let Some(pos) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::param(format!("non-finite entry at index {pos}")));
    }
    if l0_norm(v) <= s {
        return Ok(v.to_vec());
    }
    // Total order: larger magnitude first, then lower index.
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.select_nth_unstable_by(s - 1, |&a, &b| {
        v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b))
    });
    let mut out = vec![0.0; v.len()];
    for &i in &idx[..s] {
        out[i] = v[i];
    }
    Ok(out)
}

/// One proximal-gradient step on a block: `project_l0(w − grad / tau, s)`.
pub fn prox_block_step(w: &[f64], grad: &[f64], tau: f64, s: usize) -> Result<Vec<f64>> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::param(format!("step constant must be positive, got {tau}")));
    }
    if w.len() != grad.len() {
        return Err(Error::shape(format!(
            "block length {} but gradient length {}",
            w.len(),
            grad.len()
        )));
    }
    let u: Vec<f64> = w.iter().zip(grad).map(|(wi, gi)| wi - gi / tau).collect();
    project_l0(&u, s)
}
