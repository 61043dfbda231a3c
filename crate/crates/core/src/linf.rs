//! Inverse-ℓ∞ surrogate of the cardinality penalty.
//!
//! `min trace(C^T P) + lambda / ||P^T 1||_inf` over row-feasible plans is
//! split into one problem per column `i`:
//!
//! ```text
//! min_t  g_i(t) + lambda / t,   g_i(t) = min { trace(C^T P) : P 1 = p0, P >= 0, [P^T 1]_i = t }
//! ```
//!
//! `g_i` is convex piecewise linear, so each outer problem is a convex
//! scalar search.

use ndarray::Array2;
use rayon::prelude::*;

use crate::domain::{CostMatrix, ProbabilityVector, SolveReport, SolveStatus, TransportPlan};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, SimplexConfig};

pub const DEFAULT_SEARCH_TOL: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct LinfResult {
    pub plan: TransportPlan,
    /// Column whose mass is maximised.
    pub best_index: usize,
    /// Mass `t*` placed on `best_index`.
    pub best_mass: f64,
    pub report: SolveReport,
    /// Optimum of each per-column problem.
    pub per_index_values: Vec<f64>,
}

/// Golden-section minimisation of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(t, f(t))`. The endpoints are evaluated too, so boundary
/// minima are found exactly.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    try_golden_section(|t| Ok(f(t)), lo, hi, tol)
}

/// [`golden_section`] for fallible objectives.
pub fn try_golden_section(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "golden section needs lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        )));
    }
    let mut eval = |t: f64| -> Result<f64> {
        let v = f(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("golden-section objective"))
        }
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
        }
    }
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for t in [lo, hi] {
        let v = eval(t)?;
        if v < best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

/// Cheapest column other than `i` for every row; lowest index on ties.
fn cheapest_other(c: &CostMatrix, i: usize) -> Vec<usize> {
    (0..c.rows())
        .map(|j| {
            let mut best = (usize::MAX, f64::INFINITY);
            for k in (0..c.cols()).filter(|&k| k != i) {
                if c.get(j, k) < best.1 {
                    best = (k, c.get(j, k));
                }
            }
            best.0
        })
        .collect()
}

/// Slice solution: the value of `g_i(t)` and a witness plan.
struct Slice {
    value: f64,
    plan: Array2<f64>,
    pivots: usize,
}

/// Solves the slice `[P^T 1]_i = t`.
///
/// Once the mass each row sends to column `i` is fixed, the rest of the row
/// goes to its cheapest other column, so the program only needs those two
/// variables per row: `a_j + b_j = p0_j`, `sum_j a_j = t`.
fn solve_slice(
    c: &CostMatrix,
    p0: &ProbabilityVector,
    i: usize,
    other: &[usize],
    t: f64,
    cfg: &SimplexConfig,
) -> Result<Slice> {
    let n = p0.len();
    let w = p0.weights();
    if n == 1 {
        if (t - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "a single point must keep all its mass, got t = {t}"
            )));
        }
        return Ok(Slice {
            value: c.get(0, 0),
            plan: Array2::from_elem((1, 1), 1.0),
            pivots: 0,
        });
    }
    // variables of zero-mass rows appear in no constraint; price them at zero
    let mut objective = vec![0.0; 2 * n];
    for j in (0..n).filter(|&j| w[j] > 0.0) {
        objective[j] = c.get(j, i);
        objective[n + j] = c.get(j, other[j]);
    }
    let mut rows: Vec<Vec<(usize, f64)>> = (0..n).map(|j| vec![(j, 1.0), (n + j, 1.0)]).collect();
    let mut rhs: Vec<f64> = w.to_vec();
    // zero-mass rows carry nothing; keep them out of the program
    let live: Vec<usize> = (0..n).filter(|&j| w[j] > 0.0).collect();
    if live.len() < n {
        rows = live.iter().map(|&j| rows[j].clone()).collect();
        rhs = live.iter().map(|&j| w[j]).collect();
    }
    rows.push(live.iter().map(|&j| (j, 1.0)).collect());
    rhs.push(t);
    let lp = LinearProgram::new(objective, rows, rhs)?;
    let sol = solve_lp(&lp, cfg)?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::SolverFailed(format!(
            "slice for column {i} at t = {t} ended with status {:?}",
            sol.status
        )));
    }
    let mut plan = Array2::zeros((n, n));
    for j in 0..n {
        plan[[j, i]] += sol.primal[j];
        plan[[j, other[j]]] += sol.primal[n + j];
    }
    Ok(Slice {
        value: sol.objective_value,
        plan,
        pivots: sol.pivots,
    })
}

fn check_square(c: &CostMatrix, p0: &ProbabilityVector) -> Result<()> {
    let n = p0.len();
    if !c.is_square() || c.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: c.rows() * c.cols(),
        });
    }
    Ok(())
}

/// `g_i(t)`: cheapest row-feasible transport placing mass `t` on column `i`.
pub fn inner_cost(c: &CostMatrix, p0: &ProbabilityVector, i: usize, t: f64) -> Result<f64> {
    check_square(c, p0)?;
    if i >= p0.len() {
        return Err(Error::InvalidParameter(format!("column {i} out of range")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
    }
    let other = cheapest_other(c, i);
    Ok(solve_slice(c, p0, i, &other, t, &SimplexConfig::default())?.value)
}

/// Lower end of the mass search.
pub fn search_floor(p0: &ProbabilityVector) -> f64 {
    (p0.max() / 10.0).max(1e-6)
}

struct IndexOptimum {
    t: f64,
    value: f64,
    evaluations: usize,
}

fn optimise_index(
    c: &CostMatrix,
    p0: &ProbabilityVector,
    lambda: f64,
    i: usize,
    search_tol: f64,
    cfg: &SimplexConfig,
) -> Result<IndexOptimum> {
    if p0.len() == 1 {
        return Ok(IndexOptimum {
            t: 1.0,
            value: c.get(0, 0) + lambda,
            evaluations: 1,
        });
    }
    let other = cheapest_other(c, i);
    let mut evaluations = 0;
    let (t, value) = try_golden_section(
        |t| {
            evaluations += 1;
            Ok(solve_slice(c, p0, i, &other, t, cfg)?.value + lambda / t)
        },
        search_floor(p0),
        1.0,
        search_tol,
    )?;
    Ok(IndexOptimum {
        t,
        value,
        evaluations,
    })
}

/// Solves the relaxation over all `N` columns in parallel.
///
/// Ties between columns go to the lowest index, so the result does not
/// depend on scheduling.
pub fn solve_linf(
    c: &CostMatrix,
    p0: &ProbabilityVector,
    lambda: f64,
    search_tol: f64,
) -> Result<LinfResult> {
    check_square(c, p0)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
    }
    if !(search_tol > 0.0) {
        return Err(Error::InvalidParameter("search tolerance must be positive".into()));
    }
    let cfg = SimplexConfig::default();
    let n = p0.len();
    let optima: Vec<IndexOptimum> = (0..n)
        .into_par_iter()
        .map(|i| optimise_index(c, p0, lambda, i, search_tol, &cfg))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, o) in optima.iter().enumerate() {
        if o.value < optima[best].value {
            best = i;
        }
    }
    let t = optima[best].t;
    let slice = if n == 1 {
        solve_slice(c, p0, 0, &[0], 1.0, &cfg)?
    } else {
        solve_slice(c, p0, best, &cheapest_other(c, best), t, &cfg)?
    };
    let plan = TransportPlan::new(slice.plan, p0.clone(), None)?;
    let evaluations = optima.iter().map(|o| o.evaluations).sum::<usize>();
    Ok(LinfResult {
        plan,
        best_index: best,
        best_mass: t,
        report: SolveReport::exact(optima[best].value, evaluations + slice.pivots, SolveStatus::Optimal),
        per_index_values: optima.iter().map(|o| o.value).collect(),
    })
}

/// Objective of the original (nonconvex) form at `plan`.
pub fn linf_objective(c: &CostMatrix, plan: &TransportPlan, lambda: f64) -> f64 {
    let peak = plan.column_sums().iter().copied().fold(0.0, f64::max);
    c.inner(plan.entries()) + lambda / peak
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_diag() -> (CostMatrix, ProbabilityVector) {
        let c = CostMatrix::from_rows(vec![
            vec![0.0, 1.0, 4.0],
            vec![1.0, 0.0, 1.0],
            vec![4.0, 1.0, 0.0],
        ])
        .unwrap();
        (c, ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap())
    }

    #[test]
    fn golden_section_examples() {
        let (t, _) = golden_section(|t| (t - 0.3) * (t - 0.3), 0.0, 1.0, 1e-6).unwrap();
        assert!((t - 0.3).abs() <= 1e-6);
        let (t, v) = golden_section(|t| 2.0 - t, 0.0, 1.0, 1e-6).unwrap();
        assert_eq!((t, v), (1.0, 1.0));
        let (t, v) = golden_section(|t| t + 0.25 / t, 1e-3, 1.0, 1e-7).unwrap();
        assert!((t - 0.5).abs() <= 1e-6 && (v - 1.0).abs() < 1e-12);
        assert!(golden_section(|_| f64::NAN, 0.0, 1.0, 1e-3).is_err());
        assert!(golden_section(|t| t, 1.0, 0.0, 1e-3).is_err());
    }

    #[test]
    fn inner_cost_endpoints() {
        let (c, p0) = zero_diag();
        for i in 0..3 {
            let g = inner_cost(&c, &p0, i, p0.weights()[i]).unwrap();
            assert!(g.abs() < 1e-12);
            let all: f64 = (0..3).map(|j| p0.weights()[j] * c.get(j, i)).sum();
            assert!((inner_cost(&c, &p0, i, 1.0).unwrap() - all).abs() < 1e-12);
        }
        assert!(inner_cost(&c, &p0, 0, 1.5).is_err());
    }

    #[test]
    fn single_point() {
        let c = CostMatrix::from_rows(vec![vec![0.7]]).unwrap();
        let p0 = ProbabilityVector::uniform(1).unwrap();
        let res = solve_linf(&c, &p0, 2.0, DEFAULT_SEARCH_TOL).unwrap();
        assert_eq!(res.best_mass, 1.0);
        assert!((res.report.objective - 2.7).abs() < 1e-12);
    }

    #[test]
    fn objective_below_single_column_witness() {
        let (c, p0) = zero_diag();
        let lambda = 0.8;
        let res = solve_linf(&c, &p0, lambda, DEFAULT_SEARCH_TOL).unwrap();
        let witness = (0..3)
            .map(|i| (0..3).map(|j| p0.weights()[j] * c.get(j, i)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!(res.report.objective <= witness + lambda + 1e-12);
        let direct = linf_objective(&c, &res.plan, lambda);
        assert!((direct - res.report.objective).abs() < 1e-4);
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let (c, p0) = zero_diag();
        assert!(solve_linf(&c, &p0, 0.0, 1e-5).is_err());
    }
}
