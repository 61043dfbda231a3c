//! Sum-of-norms relaxation of the cardinality penalty, solved by ADMM.
//!
//! Problem:
//!
//! ```text
//! min  trace(C^T P) + (lambda / ||p0||) * sum_j ||P_j||
//! s.t. P 1 = p0,  P >= 0
//! ```
//!
//! where `P_j` are the columns of the plan. The penalty is the group lasso
//! with one group per column, so whole columns (candidate representatives)
//! switch off as `lambda` grows.

use ndarray::Array2;

use crate::domain::{CostMatrix, ProbabilityVector, SolveReport, SolveStatus, TransportPlan};
use crate::error::{Error, Result};

/// ADMM parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmConfig {
    /// Penalty parameter relative to `max(max C, lambda) / mean(p0)`.
    pub rho: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iterations: usize,
    /// Rescale `rho` by 2 when one residual exceeds the other tenfold.
    pub residual_balancing: bool,
    /// Keep `(primal, dual)` residuals of every iteration.
    pub record_history: bool,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            eps_abs: 1e-6,
            eps_rel: 1e-4,
            max_iterations: 10_000,
            residual_balancing: true,
            record_history: false,
        }
    }
}

impl AdmmConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.eps_abs > 0.0 && self.eps_rel > 0.0) {
            return Err(Error::InvalidParameter("ADMM tolerances must be positive".into()));
        }
        Ok(())
    }
}

const BALANCE_EVERY: usize = 10;
const BALANCE_RATIO: f64 = 10.0;
const MAX_BALANCE_STEPS: usize = 10;

#[derive(Debug, Clone)]
pub struct SonResult {
    /// Row-feasible iterate `P`.
    pub plan: TransportPlan,
    /// Column-shrunk iterate `Z`.
    pub auxiliary: Array2<f64>,
    pub report: SolveReport,
    pub lambda: f64,
    /// Residual pairs per iteration, empty unless requested.
    pub history: Vec<(f64, f64)>,
}

/// Relaxed objective `trace(C^T P) + lambda / ||p0|| * sum_j ||P_j||`.
pub fn son_objective(c: &CostMatrix, plan: &TransportPlan, lambda: f64) -> f64 {
    let pn = plan.row_target().norm2();
    c.inner(plan.entries()) + lambda / pn * plan.column_norms().sum()
}

/// Euclidean projection of `v` onto `{z >= 0, sum z = r}`.
pub fn project_scaled_simplex(v: &[f64], r: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    let mut scratch = Vec::with_capacity(v.len());
    project_in_place(&mut out, r, &mut scratch);
    out
}

/// Sort-and-threshold projection, overwriting `v`.
fn project_in_place(v: &mut [f64], r: f64, sorted: &mut Vec<f64>) {
    if r <= 0.0 || v.is_empty() {
        v.iter_mut().for_each(|x| *x = 0.0);
        return;
    }
    sorted.clear();
    sorted.extend_from_slice(v);
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - r) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}

/// Proximal map of `kappa * sum_j ||V_j||` applied column by column.
pub fn group_shrink(v: &Array2<f64>, kappa: f64) -> Array2<f64> {
    let mut out = v.clone();
    for mut col in out.columns_mut() {
        let norm = col.dot(&col).sqrt();
        let factor = if norm > kappa { 1.0 - kappa / norm } else { 0.0 };
        col.mapv_inplace(|x| x * factor);
    }
    out
}

/// Does the single-column plan `p0 e_j^T` satisfy the optimality conditions?
///
/// With `mu = lambda / ||p0||` the plan is optimal iff for every other
/// column `k` the vector `max(0, p0/||p0|| + (C_j - C_k)/mu)` (rows with
/// positive mass only) has norm at most one.
pub fn single_column_is_optimal(c: &CostMatrix, p0: &ProbabilityVector, lambda: f64, j: usize) -> bool {
    if lambda <= 0.0 {
        return false;
    }
    let (n, w) = (p0.len(), p0.weights());
    let pn = p0.norm2();
    let mu = lambda / pn;
    (0..n).filter(|&k| k != j).all(|k| {
        let sq: f64 = (0..n)
            .filter(|&i| w[i] > 0.0)
            .map(|i| {
                let g = (w[i] / pn + (c.get(i, j) - c.get(i, k)) / mu).max(0.0);
                g * g
            })
            .sum();
        sq <= 1.0 + 1e-12
    })
}

/// Column minimising `sum_i p0_i C_ij`; lowest index on ties.
pub fn medoid(c: &CostMatrix, p0: &ProbabilityVector) -> usize {
    let w = p0.weights();
    let mut best = (0, f64::INFINITY);
    for j in 0..c.cols() {
        let v: f64 = (0..c.rows()).map(|i| w[i] * c.get(i, j)).sum();
        if v < best.1 {
            best = (j, v);
        }
    }
    best.0
}

/// Solves the sum-of-norms relaxation.
///
/// The medoid single-column plan is checked against the optimality
/// conditions first; when it passes, it is returned without iterating.
/// Otherwise ADMM runs from `P = Z = diag(p0)`, `U = 0`.
pub fn solve_son(
    c: &CostMatrix,
    p0: &ProbabilityVector,
    lambda: f64,
    cfg: &AdmmConfig,
) -> Result<SonResult> {
    cfg.validate()?;
    let n = p0.len();
    if !c.is_square() || c.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: c.rows() * c.cols(),
        });
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    let j = medoid(c, p0);
    if single_column_is_optimal(c, p0, lambda, j) {
        let mut entries = Array2::zeros((n, n));
        for (i, &w) in p0.weights().iter().enumerate() {
            entries[[i, j]] = w;
        }
        let plan = TransportPlan::new(entries.clone(), p0.clone(), None)?;
        let objective = son_objective(c, &plan, lambda);
        return Ok(SonResult {
            plan,
            auxiliary: entries,
            report: SolveReport::exact(objective, 0, SolveStatus::Optimal),
            lambda,
            history: Vec::new(),
        });
    }
    admm(c, p0, lambda, cfg)
}

fn frob(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn admm(c: &CostMatrix, p0: &ProbabilityVector, lambda: f64, cfg: &AdmmConfig) -> Result<SonResult> {
    let n = p0.len();
    let w = p0.weights();
    let pn = p0.norm2();
    let cflat: Vec<f64> = c.view().iter().copied().collect();
    let mean_p = 1.0 / n as f64;
    let mut scale = c.max().max(lambda) / mean_p;
    if scale <= 0.0 {
        scale = 1.0 / mean_p;
    }
    let mut rho = cfg.rho * scale;

    let mut pi = vec![0.0; n * n];
    for i in 0..n {
        pi[i * n + i] = w[i];
    }
    let mut z = pi.clone();
    let mut z_old = vec![0.0; n * n];
    let mut u = vec![0.0; n * n];
    let mut sorted = Vec::with_capacity(n);
    let mut history = Vec::new();
    let mut balance_steps = 0;
    let mut status = SolveStatus::MaxIterations;
    let (mut r, mut s) = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;

    for it in 0..cfg.max_iterations {
        iterations = it + 1;
        // P-update: row-wise projection of Z - U - C/rho
        for i in 0..n {
            let row = &mut pi[i * n..(i + 1) * n];
            for k in 0..n {
                let idx = i * n + k;
                row[k] = z[idx] - u[idx] - cflat[idx] / rho;
            }
            project_in_place(row, w[i], &mut sorted);
        }
        // Z-update: column shrinkage of P + U
        std::mem::swap(&mut z, &mut z_old);
        let kappa = lambda / (rho * pn);
        for k in 0..n {
            let mut sq = 0.0;
            for i in 0..n {
                let v = pi[i * n + k] + u[i * n + k];
                z[i * n + k] = v;
                sq += v * v;
            }
            let norm = sq.sqrt();
            let factor = if norm > kappa { 1.0 - kappa / norm } else { 0.0 };
            for i in 0..n {
                z[i * n + k] *= factor;
            }
        }
        // U-update and residuals
        let mut r2 = 0.0;
        let mut dz2 = 0.0;
        for idx in 0..n * n {
            let d = pi[idx] - z[idx];
            u[idx] += d;
            r2 += d * d;
            let e = z[idx] - z_old[idx];
            dz2 += e * e;
        }
        r = r2.sqrt();
        s = rho * dz2.sqrt();
        if !(r.is_finite() && s.is_finite()) {
            return Err(Error::NonFinite("ADMM iterate"));
        }
        if cfg.record_history {
            history.push((r, s));
        }
        let eps_primal = n as f64 * cfg.eps_abs + cfg.eps_rel * frob(&pi).max(frob(&z));
        let eps_dual = n as f64 * cfg.eps_abs + cfg.eps_rel * rho * frob(&u);
        if r <= eps_primal && s <= eps_dual {
            status = SolveStatus::Optimal;
            break;
        }
        if cfg.residual_balancing && balance_steps < MAX_BALANCE_STEPS && it % BALANCE_EVERY == 0 {
            // U is scaled, so rho * U stays the same dual variable
            if r > BALANCE_RATIO * s {
                rho *= 2.0;
                u.iter_mut().for_each(|x| *x /= 2.0);
                balance_steps += 1;
            } else if s > BALANCE_RATIO * r {
                rho /= 2.0;
                u.iter_mut().for_each(|x| *x *= 2.0);
                balance_steps += 1;
            }
        }
    }

    let entries = Array2::from_shape_vec((n, n), pi).expect("square");
    let plan = TransportPlan::new(entries, p0.clone(), None)?;
    let objective = son_objective(c, &plan, lambda);
    Ok(SonResult {
        plan,
        auxiliary: Array2::from_shape_vec((n, n), z).expect("square"),
        report: SolveReport {
            objective,
            iterations,
            primal_residual: r,
            dual_residual: s,
            status,
        },
        lambda,
        history,
    })
}
