//! Fractional facility-location relaxation.
//!
//! ```text
//! min  trace(C^T P) + lambda * sum_j y_j
//! s.t. P 1 = p0,  0 <= P_ij <= p0_i y_j,  0 <= y <= 1
//! ```
//!
//! `y_j` is the (relaxed) indicator that point `j` serves as a
//! representative. Coupling rows are only generated for rows with positive
//! mass; a zero-mass row is already forced to zero by its row-sum equality.

use ndarray::Array2;

use crate::domain::{CostMatrix, ProbabilityVector, SolveReport, SolveStatus, TransportPlan};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, solve_lp_from_basis, to_standard_form, GeneralLp, SimplexConfig, StandardForm};

/// Size guard and simplex settings.
#[derive(Debug, Clone, PartialEq)]
pub struct FacilityOptions {
    /// Largest accepted number of points.
    pub max_points: usize,
    pub simplex: SimplexConfig,
}

impl Default for FacilityOptions {
    fn default() -> Self {
        Self {
            max_points: 128,
            simplex: SimplexConfig::default(),
        }
    }
}

/// The relaxation in standard form plus its variable map.
#[derive(Debug, Clone)]
pub struct FacilityLp {
    form: StandardForm,
    n: usize,
    lambda: f64,
    /// Standard-form column of the coupling slack for `(i, j)`.
    coupling_slack: Vec<Option<usize>>,
}

impl FacilityLp {
    pub fn standard_form(&self) -> &StandardForm {
        &self.form
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn plan_index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn opening_index(&self, j: usize) -> usize {
        self.n * self.n + j
    }

    /// Same constraints, different `lambda`. Bases carry over.
    pub fn with_lambda(&self, c: &CostMatrix, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let objective = objective(c, self.n, lambda);
        Ok(Self {
            form: self.form.with_objective(&objective)?,
            lambda,
            ..self.clone()
        })
    }

    /// Feasible starting basis: `P = diag(p0)`, every `y_j = 1`.
    ///
    /// Basic columns are the diagonal of `P` (row-sum rows), every `y_j`
    /// (its bound row) and every coupling slack.
    pub fn crash_basis(&self) -> Vec<usize> {
        let sf = &self.form;
        let m = sf.program().constraint_count();
        let mut basis = vec![usize::MAX; m];
        for i in 0..self.n {
            if let Some(r) = sf.constraint_row(i) {
                basis[r] = self.plan_index(i, i);
            }
        }
        for j in 0..self.n {
            if let Some(r) = sf.bound_row(self.opening_index(j)) {
                basis[r] = self.opening_index(j);
            }
        }
        // coupling constraints follow the n row-sum constraints in order
        let coupling = self.coupling_slack.iter().flatten();
        for (offset, &slack) in coupling.enumerate() {
            if let Some(r) = sf.constraint_row(self.n + offset) {
                basis[r] = slack;
            }
        }
        debug_assert!(basis.iter().all(|&b| b != usize::MAX));
        basis
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(())
}

fn objective(c: &CostMatrix, n: usize, lambda: f64) -> Vec<f64> {
    let mut obj: Vec<f64> = c.view().iter().copied().collect();
    obj.extend(std::iter::repeat(lambda).take(n));
    obj
}

/// Builds the relaxation with the default size guard.
pub fn build_facility_lp(c: &CostMatrix, p0: &ProbabilityVector, lambda: f64) -> Result<FacilityLp> {
    build_facility_lp_with(c, p0, lambda, &FacilityOptions::default())
}

pub fn build_facility_lp_with(
    c: &CostMatrix,
    p0: &ProbabilityVector,
    lambda: f64,
    opts: &FacilityOptions,
) -> Result<FacilityLp> {
    let n = p0.len();
    if !c.is_square() || c.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: c.rows() * c.cols(),
        });
    }
    if n > opts.max_points {
        return Err(Error::TooLarge {
            size: n,
            limit: opts.max_points,
        });
    }
    check_lambda(lambda)?;
    let w = p0.weights();
    let mut g = GeneralLp::new(objective(c, n, lambda));
    for i in 0..n {
        g.equal((0..n).map(|j| (i * n + j, 1.0)).collect(), w[i]);
    }
    let mut coupling_vars = vec![false; n * n];
    for i in 0..n {
        if w[i] <= 0.0 {
            continue;
        }
        for j in 0..n {
            g.less_equal(vec![(i * n + j, 1.0), (n * n + j, -w[i])], 0.0);
            coupling_vars[i * n + j] = true;
        }
    }
    for j in 0..n {
        g.set_upper(n * n + j, 1.0);
    }
    let form = to_standard_form(&g)?;
    let mut coupling_slack = vec![None; n * n];
    let mut c_idx = n;
    for (k, &has) in coupling_vars.iter().enumerate() {
        if has {
            coupling_slack[k] = form.constraint_slack(c_idx);
            c_idx += 1;
        }
    }
    Ok(FacilityLp {
        form,
        n,
        lambda,
        coupling_slack,
    })
}

#[derive(Debug, Clone)]
pub struct FacilityResult {
    pub plan: TransportPlan,
    /// Relaxed opening variables `y`.
    pub openings: Vec<f64>,
    pub report: SolveReport,
    /// `false` when the optimal `y` is not unique (`lambda = 0`); the
    /// reported openings are then the tight values `max_i P_ij / p0_i`.
    pub openings_unique: bool,
    /// Final simplex basis, reusable as a warm start.
    pub basis: Vec<usize>,
}

/// Solves the relaxation from a cold start.
pub fn solve_facility_relaxation(
    c: &CostMatrix,
    p0: &ProbabilityVector,
    lambda: f64,
) -> Result<FacilityResult> {
    let lp = build_facility_lp(c, p0, lambda)?;
    solve_facility_lp(&lp, c, p0, None, &SimplexConfig::default())
}

/// Solves a built relaxation, starting from `warm` (a previous basis of the
/// same structure) or from [`FacilityLp::crash_basis`].
pub fn solve_facility_lp(
    lp: &FacilityLp,
    c: &CostMatrix,
    p0: &ProbabilityVector,
    warm: Option<&[usize]>,
    cfg: &SimplexConfig,
) -> Result<FacilityResult> {
    let n = lp.n;
    let program = lp.form.program();
    let start = match warm {
        Some(b) => b.to_vec(),
        None => lp.crash_basis(),
    };
    let sol = match solve_lp_from_basis(program, &start, cfg) {
        Ok(s) => s,
        Err(_) => solve_lp(program, cfg)?,
    };
    if !sol.is_optimal() {
        return Err(Error::SolverFailed(format!(
            "facility LP ended with status {:?} after {} pivots",
            sol.status, sol.pivots
        )));
    }
    let x = lp.form.original_values(&sol.primal);
    let entries = Array2::from_shape_vec((n, n), x[..n * n].to_vec()).expect("square");
    let plan = TransportPlan::new(entries, p0.clone(), None)?;
    let w = p0.weights();
    let mut openings: Vec<f64> = x[n * n..].iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let openings_unique = lp.lambda > 0.0;
    if !openings_unique {
        for (j, y) in openings.iter_mut().enumerate() {
            *y = (0..n)
                .filter(|&i| w[i] > 0.0)
                .map(|i| plan.get(i, j) / w[i])
                .fold(0.0, f64::max)
                .min(1.0);
        }
    }
    let objective = c.inner(plan.entries()) + lp.lambda * openings.iter().sum::<f64>();
    Ok(FacilityResult {
        plan,
        openings,
        report: SolveReport::exact(objective, sol.pivots, SolveStatus::Optimal),
        openings_unique,
        basis: sol.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_costs(xs: &[f64]) -> CostMatrix {
        CostMatrix::from_rows(
            xs.iter()
                .map(|a| xs.iter().map(|b| (a - b) * (a - b)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_point() {
        let c = line_costs(&[0.0]);
        let p0 = ProbabilityVector::uniform(1).unwrap();
        let res = solve_facility_relaxation(&c, &p0, 2.5).unwrap();
        assert!((res.plan.get(0, 0) - 1.0).abs() < 1e-12);
        assert!((res.openings[0] - 1.0).abs() < 1e-12);
        assert!((res.report.objective - 2.5).abs() < 1e-12);
    }

    #[test]
    fn zero_lambda_is_identity_with_tight_openings() {
        let c = line_costs(&[0.0, 1.0, 3.0]);
        let p0 = ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let res = solve_facility_relaxation(&c, &p0, 0.0).unwrap();
        assert!(res.report.objective.abs() < 1e-12);
        assert!(!res.openings_unique);
        for i in 0..3 {
            assert!((res.plan.get(i, i) - p0.weights()[i]).abs() < 1e-12);
            assert!((res.openings[i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_lambda_opens_the_medoid_only() {
        let c = line_costs(&[0.0, 1.0, 3.0]);
        let p0 = ProbabilityVector::uniform(3).unwrap();
        let res = solve_facility_relaxation(&c, &p0, 1e3).unwrap();
        // medoid is the middle point: (1 + 0 + 4) / 3
        assert!((res.openings.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!((res.openings[1] - 1.0).abs() < 1e-9);
        assert!((res.report.objective - (5.0 / 3.0 + 1e3)).abs() < 1e-9);
    }

    #[test]
    fn zero_mass_rows_get_no_coupling() {
        let c = line_costs(&[0.0, 1.0, 3.0]);
        let p0 = ProbabilityVector::new(vec![0.5, 0.0, 0.5]).unwrap();
        let lp = build_facility_lp(&c, &p0, 1.0).unwrap();
        assert_eq!(lp.standard_form().program().constraint_count(), 3 + 6 + 3);
        let res = solve_facility_lp(&lp, &c, &p0, None, &SimplexConfig::default()).unwrap();
        assert!(res.plan.row(1).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn size_guard() {
        let c = line_costs(&[0.0, 1.0, 2.0]);
        let p0 = ProbabilityVector::uniform(3).unwrap();
        let opts = FacilityOptions {
            max_points: 2,
            ..FacilityOptions::default()
        };
        assert!(matches!(
            build_facility_lp_with(&c, &p0, 1.0, &opts),
            Err(Error::TooLarge { size: 3, limit: 2 })
        ));
    }

    #[test]
    fn warm_start_matches_cold_start() {
        let c = line_costs(&[0.0, 0.2, 5.0, 5.3, 9.0]);
        let p0 = ProbabilityVector::uniform(5).unwrap();
        let cfg = SimplexConfig::default();
        let lp = build_facility_lp(&c, &p0, 0.5).unwrap();
        let first = solve_facility_lp(&lp, &c, &p0, None, &cfg).unwrap();
        let next = lp.with_lambda(&c, 3.0).unwrap();
        let warm = solve_facility_lp(&next, &c, &p0, Some(&first.basis), &cfg).unwrap();
        let cold = solve_facility_relaxation(&c, &p0, 3.0).unwrap();
        assert!((warm.report.objective - cold.report.objective).abs() < 1e-9);
    }
}
