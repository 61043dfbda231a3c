//! Exact linear programming: standard-form conversion and a two-phase
//! revised simplex method.
//!
//! Standard form is `min c^T x` subject to `A x = b`, `x >= 0`, with `A`
//! stored sparsely by row. The solver keeps a sparse LU factorization of the
//! basis, updated in product form between periodic refactorizations.

mod factor;
mod simplex;
mod standard;

use thiserror::Error;

pub use simplex::{solve_lp, solve_lp_from_basis, SimplexConfig};
pub use standard::{to_standard_form, Constraint, GeneralLp, Relation, StandardForm, VariableBounds};

use crate::domain::SolveStatus;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("variable index {index} out of range for {count} variables")]
    VariableOutOfRange { index: usize, count: usize },

    #[error("expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("row {0} has no nonzero coefficients")]
    EmptyRow(usize),

    #[error("equality row {0} has no coefficients but a nonzero right-hand side")]
    InconsistentRow(usize),

    #[error("contradictory bounds on variable {var}: lower {lower} > upper {upper}")]
    ContradictoryBounds { var: usize, lower: f64, upper: f64 },

    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),

    #[error("invalid starting basis: {0}")]
    InvalidBasis(String),

    #[error("basis matrix is numerically singular")]
    SingularBasis,
}

/// A linear program in standard form.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    columns: Vec<Vec<(usize, f64)>>,
    /// `-1` where a row was negated to make its right-hand side nonnegative.
    row_sign: Vec<f64>,
}

impl LinearProgram {
    /// Builds `min c^T x, A x = b, x >= 0` from sparse rows.
    ///
    /// Duplicate column entries within a row are summed and explicit zeros
    /// dropped. Rows with a negative right-hand side are negated internally;
    /// duals are always reported against the rows as given.
    pub fn new(
        objective: Vec<f64>,
        rows: Vec<Vec<(usize, f64)>>,
        rhs: Vec<f64>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        if rows.len() != rhs.len() {
            return Err(LpError::Dimension {
                expected: rows.len(),
                got: rhs.len(),
            });
        }
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        let mut clean_rows = Vec::with_capacity(rows.len());
        let mut clean_rhs = Vec::with_capacity(rhs.len());
        let mut row_sign = Vec::with_capacity(rhs.len());
        for (i, (mut row, b)) in rows.into_iter().zip(rhs).enumerate() {
            if !b.is_finite() {
                return Err(LpError::NonFinite("right-hand side"));
            }
            for &(j, a) in &row {
                if j >= n {
                    return Err(LpError::VariableOutOfRange { index: j, count: n });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite("constraint matrix"));
                }
            }
            row.sort_by_key(|&(j, _)| j);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for (j, a) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += a,
                    _ => merged.push((j, a)),
                }
            }
            merged.retain(|&(_, a)| a != 0.0);
            if merged.is_empty() {
                return Err(LpError::EmptyRow(i));
            }
            let sign = if b < 0.0 { -1.0 } else { 1.0 };
            if sign < 0.0 {
                merged.iter_mut().for_each(|e| e.1 = -e.1);
            }
            clean_rows.push(merged);
            clean_rhs.push(sign * b);
            row_sign.push(sign);
        }
        let mut columns = vec![Vec::new(); n];
        for (i, row) in clean_rows.iter().enumerate() {
            for &(j, a) in row {
                columns[j].push((i, a));
            }
        }
        Ok(Self {
            objective,
            rows: clean_rows,
            rhs: clean_rhs,
            columns,
            row_sign,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// Constraint rows after sign normalisation (`b >= 0`).
    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    /// Right-hand side after sign normalisation (`b >= 0`).
    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub(crate) fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    pub(crate) fn row_sign(&self, i: usize) -> f64 {
        self.row_sign[i]
    }

    /// Returns a copy with a different objective vector.
    pub fn with_objective(&self, objective: Vec<f64>) -> Result<Self, LpError> {
        if objective.len() != self.objective.len() {
            return Err(LpError::Dimension {
                expected: self.objective.len(),
                got: objective.len(),
            });
        }
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        Ok(Self {
            objective,
            ..self.clone()
        })
    }

    /// Largest violation of `A x = b` (in the normalised row signs).
    pub fn equality_residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().map(|&(j, a)| a * x[j]).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Output of the simplex method.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub primal: Vec<f64>,
    pub objective_value: f64,
    /// Basic column per constraint row position. An index `n + i`, with `n`
    /// the variable count, names the artificial column of row `i`; those
    /// only remain basic at zero level on redundant rows.
    pub basis: Vec<usize>,
    /// Dual certificate `y`, one entry per row as supplied to
    /// [`LinearProgram::new`].
    pub dual: Vec<f64>,
    pub status: SolveStatus,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Dual objective `b^T y` for the rows as supplied.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        lp.rhs
            .iter()
            .zip(&lp.row_sign)
            .zip(&self.dual)
            .map(|((b, s), y)| b * s * y)
            .sum()
    }

    /// Reduced costs `c - A^T y`; nonnegative (within tolerance) at an optimum.
    pub fn reduced_costs(&self, lp: &LinearProgram) -> Vec<f64> {
        (0..lp.variable_count())
            .map(|j| {
                lp.objective[j]
                    - lp.columns[j]
                        .iter()
                        .map(|&(i, a)| a * lp.row_sign[i] * self.dual[i])
                        .sum::<f64>()
            })
            .collect()
    }
}
