//! Exact discrete optimal mass transport.
//!
//! The Kantorovich problem `min trace(C^T P)` over plans with both marginals
//! fixed is solved as a linear program. With squared Euclidean costs its
//! optimal value is the 2-Wasserstein cost; the metric is its square root.

use ndarray::Array2;

use crate::domain::{
    build_cost_matrix, CostMatrix, PointCloud, ProbabilityVector, SolveReport, SolveStatus,
    TransportPlan,
};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, SimplexConfig};

/// Optimal plan, its cost, and solver bookkeeping.
#[derive(Debug, Clone)]
pub struct TransportSolution {
    pub plan: TransportPlan,
    pub cost: f64,
    pub report: SolveReport,
}

/// Exact optimal transport between `p0` (rows) and `p1` (columns).
pub fn solve_transport(
    p0: &ProbabilityVector,
    p1: &ProbabilityVector,
    c: &CostMatrix,
) -> Result<(TransportPlan, f64)> {
    let s = solve_transport_with(p0, p1, c, &SimplexConfig::default())?;
    Ok((s.plan, s.cost))
}

pub fn solve_transport_with(
    p0: &ProbabilityVector,
    p1: &ProbabilityVector,
    c: &CostMatrix,
    config: &SimplexConfig,
) -> Result<TransportSolution> {
    let (n, m) = (p0.len(), p1.len());
    if c.rows() != n || c.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: n * m,
            got: c.rows() * c.cols(),
        });
    }
    let objective: Vec<f64> = c.view().iter().copied().collect();
    let mut rows = Vec::with_capacity(n + m);
    let mut rhs = Vec::with_capacity(n + m);
    for i in 0..n {
        rows.push((0..m).map(|j| (i * m + j, 1.0)).collect());
        rhs.push(p0.weights()[i]);
    }
    for j in 0..m {
        rows.push((0..n).map(|i| (i * m + j, 1.0)).collect());
        rhs.push(p1.weights()[j]);
    }
    let lp = LinearProgram::new(objective, rows, rhs)?;
    let sol = solve_lp(&lp, config)?;
    match sol.status {
        SolveStatus::Optimal => {}
        other => {
            return Err(Error::SolverFailed(format!(
                "transport LP ended with status {other:?} after {} pivots",
                sol.pivots
            )))
        }
    }
    let entries = Array2::from_shape_vec((n, m), sol.primal)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let plan = TransportPlan::new(entries, p0.clone(), Some(p1.clone()))?;
    let cost = c.inner(plan.entries());
    Ok(TransportSolution {
        plan,
        cost,
        report: SolveReport::exact(cost, sol.pivots, SolveStatus::Optimal),
    })
}

/// 2-Wasserstein cost and metric between two weighted clouds.
///
/// Returns `(cost, sqrt(cost))`; the cost is the optimal value of the
/// transport problem with squared Euclidean ground cost.
pub fn wasserstein2(
    a: &PointCloud,
    wa: &ProbabilityVector,
    b: &PointCloud,
    wb: &ProbabilityVector,
) -> Result<(f64, f64)> {
    if wa.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: wa.len(),
        });
    }
    if wb.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            got: wb.len(),
        });
    }
    let c = build_cost_matrix(a, Some(b))?;
    let (_, cost) = solve_transport(wa, wb, &c)?;
    let cost = cost.max(0.0);
    Ok((cost, cost.sqrt()))
}

/// Greedy northwest-corner plan: a feasible vertex of the transport
/// polytope with at most `N + M - 1` nonzero entries.
pub fn northwest_corner(p0: &ProbabilityVector, p1: &ProbabilityVector) -> Result<TransportPlan> {
    let (n, m) = (p0.len(), p1.len());
    let mut row_left = p0.weights().to_vec();
    let mut col_left = p1.weights().to_vec();
    let mut entries = Array2::zeros((n, m));
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        let q = row_left[i].min(col_left[j]);
        entries[[i, j]] += q;
        row_left[i] -= q;
        col_left[j] -= q;
        if i + 1 == n {
            j += 1;
        } else if j + 1 == m || row_left[i] <= col_left[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    // rounding residue lands in the last row/column
    for (r, left) in row_left.iter().enumerate() {
        if *left > 0.0 {
            entries[[r, m - 1]] += left;
        }
    }
    TransportPlan::new(entries, p0.clone(), Some(p1.clone()))
}
