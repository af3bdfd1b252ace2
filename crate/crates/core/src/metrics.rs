//! Classification metrics on margins and ±1 labels.

use crate::error::{Error, Result};

fn check(margins: &[f64], labels: &[i8]) -> Result<()> {
    if margins.len() != labels.len() {
        return Err(Error::Metric(format!(
            "{} margins but {} labels",
            margins.len(),
            labels.len()
        )));
    }
    if margins.is_empty() {
        return Err(Error::Metric("no samples".into()));
    }
    if let Some(i) = labels.iter().position(|&y| y != 1 && y != -1) {
        return Err(Error::Metric(format!("label {} at {i} is not ±1", labels[i])));
    }
    if margins.iter().any(|m| m.is_nan()) {
        return Err(Error::Metric("NaN margin".into()));
    }
    Ok(())
}

/// Fraction of samples whose predicted sign matches the label. A margin of
/// exactly 0 predicts +1.
pub fn accuracy(margins: &[f64], labels: &[i8]) -> Result<f64> {
    check(margins, labels)?;
    let hits = margins
        .iter()
        .zip(labels)
        .filter(|(&m, &y)| (if m >= 0.0 { 1 } else { -1 }) == y)
        .count();
    Ok(hits as f64 / margins.len() as f64)
}

/// Area under the ROC curve via the Mann–Whitney statistic, with tied
/// margins counting one half. Computed from midranks after one sort.
pub fn auc(margins: &[f64], labels: &[i8]) -> Result<f64> {
    check(margins, labels)?;
    let n_pos = labels.iter().filter(|&&y| y == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Metric("AUC needs both classes present".into()));
    }

    let mut order: Vec<usize> = (0..margins.len()).collect();
    order.sort_by(|&a, &b| margins[a].total_cmp(&margins[b]));

    // Twice the positive rank sum, kept in integers: a tie group occupying
    // sorted positions [start, end) has midrank (start + 1 + end) / 2.
    let mut twice_rank_sum: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let m = margins[order[start]];
        let mut end = start + 1;
        // total_cmp separates -0.0 and 0.0; ties compare by value.
        while end < order.len() && margins[order[end]] == m {
            end += 1;
        }
        let pos_in_group = order[start..end].iter().filter(|&&i| labels[i] == 1).count();
        twice_rank_sum += (pos_in_group * (start + 1 + end)) as u128;
        start = end;
    }
    let twice_u = twice_rank_sum - (n_pos * (n_pos + 1)) as u128;
    Ok((twice_u as f64 / 2.0) / (n_pos as f64 * n_neg as f64))
}
