//! Support size of the induced target distribution and its convex envelope.
//!
//! For a plan `P` with `P 1 = p0`, `card(P^T 1)` counts the columns that carry
//! mass. Over the row-feasible set the tightest convex under-estimator of that
//! count is the normalised sum of column norms,
//! `phi(P) = (1 / ||p0||_2) * sum_j ||P_j||_2`, because every column norm is
//! bounded by `||p0||_2` there.

use crate::domain::TransportPlan;
use crate::error::{Error, Result};

/// Relative factor for [`default_support_threshold`].
pub const RELATIVE_SUPPORT_THRESHOLD: f64 = 1e-6;

/// Number of entries with `|v| > threshold`.
pub fn support_cardinality(v: &[f64], threshold: f64) -> usize {
    debug_assert!(threshold >= 0.0);
    v.iter().filter(|x| x.abs() > threshold).count()
}

/// `1e-6 * max |v|`; solver outputs are never exactly zero.
pub fn default_support_threshold(v: &[f64]) -> f64 {
    RELATIVE_SUPPORT_THRESHOLD * v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// `card(P^T 1)` at the default relative threshold.
pub fn plan_support(plan: &TransportPlan) -> usize {
    let sums = plan.column_sums().to_vec();
    support_cardinality(&sums, default_support_threshold(&sums))
}

/// `phi(P) = (1 / ||p0||_2) * sum_j ||P_j||_2`.
pub fn envelope_value(plan: &TransportPlan) -> Result<f64> {
    let norm = plan.row_target().norm2();
    if norm == 0.0 {
        return Err(Error::InvalidDistribution("row target is zero".into()));
    }
    Ok(plan.column_norms().sum() / norm)
}

/// Largest column norm; the spectral norm of the block-diagonal column map.
pub fn max_column_norm(plan: &TransportPlan) -> f64 {
    plan.column_norms().iter().copied().fold(0.0, f64::max)
}
