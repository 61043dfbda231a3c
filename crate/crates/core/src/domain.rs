//! Domain types shared by every solver: point clouds, probability vectors,
//! squared-Euclidean cost matrices, transport plans, and solve reports.
//!
//! All types are immutable once constructed, so they can be shared freely
//! between concurrent solver runs.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute feasibility tolerance per constraint.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A nonempty list of points in `R^d`, optionally labelled with a
/// ground-truth cluster index.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<usize>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(points, None)
    }

    pub fn with_labels(points: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: labels.len(),
            });
        }
        Self::build(points, Some(labels))
    }

    fn build(points: Vec<Vec<f64>>, labels: Option<Vec<usize>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput("point cloud"))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "points must have dimension >= 1".into(),
            ));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("point coordinates"));
            }
        }
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Reorders points (and labels) so that new index `k` holds old index `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            points: perm.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| perm.iter().map(|&i| l[i]).collect()),
        }
    }
}

/// Nonnegative weights summing to one on a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates `weights` at the default tolerance.
    ///
    /// Entries in `[-tol, 0)` are clamped to zero. A total mass within
    /// `N * tol` of one is renormalised; anything further away is rejected.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(weights, FEASIBILITY_TOL)
    }

    pub fn with_tolerance(mut weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput("probability vector"));
        }
        for w in weights.iter_mut() {
            if !w.is_finite() {
                return Err(Error::NonFinite("probability weights"));
            }
            if *w < -tol {
                return Err(Error::InvalidDistribution(format!(
                    "negative weight {w}"
                )));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let total: f64 = weights.iter().sum();
        let n = weights.len() as f64;
        if (total - 1.0).abs() > n * tol {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        if total != 1.0 {
            weights.iter_mut().for_each(|w| *w /= total);
        }
        Ok(Self { weights })
    }

    /// Normalises arbitrary nonnegative masses into a distribution.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidDistribution(
                "masses must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("total mass is zero".into()));
        }
        Self::new(masses.into_iter().map(|m| m / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("probability vector"));
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn norm2(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn max(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            weights: perm.iter().map(|&i| self.weights[i]).collect(),
        }
    }
}

/// Pairwise squared Euclidean distances, `C[i][j] = ||x_i - y_j||^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    entries: Array2<f64>,
}

impl CostMatrix {
    /// Wraps an arbitrary nonnegative cost table.
    pub fn from_array(entries: Array2<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput("cost matrix"));
        }
        if entries.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("cost matrix"));
        }
        if entries.iter().any(|&c| c < 0.0) {
            return Err(Error::InvalidParameter("costs must be nonnegative".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParameter("ragged cost matrix".into()));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let entries = Array2::from_shape_vec((n, m), flat)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Self::from_array(entries)
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.entries.view()
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// `trace(C^T P)` for a plan of matching shape.
    pub fn inner(&self, plan: ArrayView2<'_, f64>) -> f64 {
        self.entries
            .iter()
            .zip(plan.iter())
            .map(|(c, p)| c * p)
            .sum()
    }

    /// Applies the same permutation to rows and columns.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = perm.len();
        let entries = Array2::from_shape_fn((n, n), |(i, j)| self.entries[[perm[i], perm[j]]]);
        Self { entries }
    }
}

/// Builds `C[i][j] = ||a_i - b_j||^2`; `b` defaults to `a`.
///
/// When `b` is omitted the result is symmetric with an exactly zero diagonal.
pub fn build_cost_matrix(a: &PointCloud, b: Option<&PointCloud>) -> Result<CostMatrix> {
    let b = b.unwrap_or(a);
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let entries = Array2::from_shape_fn((a.len(), b.len()), |(i, j)| {
        squared_distance(a.point(i), b.point(j))
    });
    Ok(CostMatrix { entries })
}

fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(u, v)| (u - v) * (u - v)).sum()
}

/// A nonnegative matrix whose row sums match `row_target` and, when present,
/// whose column sums match `column_target`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    entries: Array2<f64>,
    row_target: ProbabilityVector,
    column_target: Option<ProbabilityVector>,
}

impl TransportPlan {
    pub fn new(
        entries: Array2<f64>,
        row_target: ProbabilityVector,
        column_target: Option<ProbabilityVector>,
    ) -> Result<Self> {
        Self::with_tolerance(entries, row_target, column_target, FEASIBILITY_TOL)
    }

    /// Validates membership in the marginal polytope at `tol` per constraint.
    /// Entries in `[-tol, 0)` are clamped to zero.
    pub fn with_tolerance(
        mut entries: Array2<f64>,
        row_target: ProbabilityVector,
        column_target: Option<ProbabilityVector>,
        tol: f64,
    ) -> Result<Self> {
        if entries.nrows() != row_target.len() {
            return Err(Error::DimensionMismatch {
                expected: row_target.len(),
                got: entries.nrows(),
            });
        }
        if let Some(col) = &column_target {
            if entries.ncols() != col.len() {
                return Err(Error::DimensionMismatch {
                    expected: col.len(),
                    got: entries.ncols(),
                });
            }
        }
        for v in entries.iter_mut() {
            if !v.is_finite() {
                return Err(Error::NonFinite("transport plan"));
            }
            if *v < -tol {
                return Err(Error::InfeasiblePlan(format!("negative entry {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        for (i, (row, target)) in entries
            .axis_iter(Axis(0))
            .zip(row_target.weights())
            .enumerate()
        {
            let s = row.sum();
            if (s - target).abs() > tol {
                return Err(Error::InfeasiblePlan(format!(
                    "row {i} sums to {s}, expected {target}"
                )));
            }
        }
        if let Some(col) = &column_target {
            for (j, (column, target)) in entries.axis_iter(Axis(1)).zip(col.weights()).enumerate()
            {
                let s = column.sum();
                if (s - target).abs() > tol {
                    return Err(Error::InfeasiblePlan(format!(
                        "column {j} sums to {s}, expected {target}"
                    )));
                }
            }
        }
        Ok(Self {
            entries,
            row_target,
            column_target,
        })
    }

    pub fn entries(&self) -> ArrayView2<'_, f64> {
        self.entries.view()
    }

    pub fn into_entries(self) -> Array2<f64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.dim()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.entries.row(i)
    }

    pub fn row_target(&self) -> &ProbabilityVector {
        &self.row_target
    }

    pub fn column_target(&self) -> Option<&ProbabilityVector> {
        self.column_target.as_ref()
    }

    /// `P^T 1`, the target distribution induced by the plan.
    pub fn column_sums(&self) -> Array1<f64> {
        self.entries.sum_axis(Axis(0))
    }

    /// Euclidean norm of every column.
    pub fn column_norms(&self) -> Array1<f64> {
        self.entries
            .axis_iter(Axis(1))
            .map(|c| c.dot(&c).sqrt())
            .collect()
    }

    /// Transport cost `trace(C^T P)`.
    pub fn cost(&self, c: &CostMatrix) -> Result<f64> {
        if c.view().dim() != self.entries.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.len(),
                got: c.view().len(),
            });
        }
        Ok(c.inner(self.entries.view()))
    }
}

/// Exit condition of an iterative or pivoting solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    Infeasible,
    Unbounded,
}

impl SolveStatus {
    pub fn is_optimal(self) -> bool {
        self == SolveStatus::Optimal
    }
}

/// Summary of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// Objective value attained by the returned plan.
    pub objective: f64,
    pub iterations: usize,
    /// ADMM only; zero for exact solvers.
    pub primal_residual: f64,
    /// ADMM only; zero for exact solvers.
    pub dual_residual: f64,
    pub status: SolveStatus,
}

impl SolveReport {
    pub fn exact(objective: f64, iterations: usize, status: SolveStatus) -> Self {
        Self {
            objective,
            iterations,
            primal_residual: 0.0,
            dual_residual: 0.0,
            status,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn cloud(pts: &[&[f64]]) -> PointCloud {
        PointCloud::new(pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn cost_matrix_three_four_five() {
        let a = cloud(&[&[0.0, 0.0], &[3.0, 4.0]]);
        let c = build_cost_matrix(&a, None).unwrap();
        assert_eq!(c.view(), array![[0.0, 25.0], [25.0, 0.0]]);
    }

    #[test]
    fn cost_matrix_single_point() {
        let a = cloud(&[&[7.0, -1.0]]);
        let c = build_cost_matrix(&a, None).unwrap();
        assert_eq!(c.view(), array![[0.0]]);
    }

    #[test]
    fn cost_matrix_cross_clouds() {
        // (1,0)-(0,0): 1 ; (1,0)-(2,2): 1 + 4 = 5
        let a = cloud(&[&[1.0, 0.0]]);
        let b = cloud(&[&[0.0, 0.0], &[2.0, 2.0]]);
        let c = build_cost_matrix(&a, Some(&b)).unwrap();
        let hypot2 = |x: f64, y: f64| x.hypot(y).powi(2);
        assert_eq!(c.view(), array![[1.0, 5.0]]);
        assert!((c.get(0, 1) - hypot2(1.0 - 2.0, 0.0 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn cost_matrix_dimension_mismatch() {
        let a = cloud(&[&[1.0, 0.0]]);
        let b = cloud(&[&[0.0, 0.0, 1.0]]);
        assert!(matches!(
            build_cost_matrix(&a, Some(&b)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ragged_cloud_rejected() {
        assert!(PointCloud::new(vec![vec![0.0], vec![1.0, 2.0]]).is_err());
        assert!(PointCloud::new(vec![]).is_err());
    }

    #[test]
    fn probability_vector_renormalises_small_drift() {
        let p = ProbabilityVector::new(vec![0.5 + 4e-10, 0.5]).unwrap();
        assert!((p.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(ProbabilityVector::new(vec![0.6, 0.5]).is_err());
        assert!(ProbabilityVector::new(vec![1.0 + 1e-10, -1e-10]).is_ok());
        assert!(ProbabilityVector::new(vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn plan_checks_marginals() {
        let p = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        let ok = TransportPlan::new(array![[0.5, 0.0], [0.25, 0.25]], p.clone(), None);
        assert!(ok.is_ok());
        let bad = TransportPlan::new(array![[0.5, 0.1], [0.25, 0.25]], p.clone(), None);
        assert!(matches!(bad, Err(Error::InfeasiblePlan(_))));
        let cols = ProbabilityVector::new(vec![0.75, 0.25]).unwrap();
        let with_cols =
            TransportPlan::new(array![[0.5, 0.0], [0.25, 0.25]], p, Some(cols)).unwrap();
        assert_eq!(with_cols.column_sums(), array![0.75, 0.25]);
    }
}
