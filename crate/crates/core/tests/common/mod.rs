//! Brute-force oracles shared by the integration tests. None of them call
//! into the solvers they check.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use sparse_omt::{build_cost_matrix, CostMatrix, PointCloud, ProbabilityVector};

pub fn random_cloud(rng: &mut StdRng, n: usize, dim: usize, scale: f64) -> PointCloud {
    PointCloud::new(
        (0..n)
            .map(|_| (0..dim).map(|_| rng.gen::<f64>() * scale).collect())
            .collect(),
    )
    .unwrap()
}

pub fn random_costs(rng: &mut StdRng, n: usize, scale: f64) -> CostMatrix {
    build_cost_matrix(&random_cloud(rng, n, 2, scale), None).unwrap()
}

pub fn random_distribution(rng: &mut StdRng, n: usize) -> ProbabilityVector {
    ProbabilityVector::from_masses((0..n).map(|_| 0.05 + rng.gen::<f64>()).collect()).unwrap()
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Cheapest assignment with uniform marginals: `(1/n) min_sigma sum C[i][sigma(i)]`.
/// With uniform marginals the transport polytope's vertices are permutations.
pub fn best_matching_cost(c: &CostMatrix) -> f64 {
    let n = c.rows();
    permutations(n)
        .iter()
        .map(|s| (0..n).map(|i| c.get(i, s[i])).sum::<f64>() / n as f64)
        .fold(f64::INFINITY, f64::min)
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[r][k] -= f * a[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

pub fn rank(rows: &[Vec<f64>]) -> usize {
    let mut a = rows.to_vec();
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..m).find(|&i| a[i][col].abs() > 1e-9) else {
            continue;
        };
        a.swap(r, piv);
        for i in 0..m {
            if i != r {
                let f = a[i][col] / a[r][col];
                for k in 0..n {
                    a[i][k] -= f * a[r][k];
                }
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            go(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Basic solutions of `A x = b, x >= 0` for a full-row-rank dense `A`.
pub fn basic_feasible_solutions(a: &[Vec<f64>], b: &[f64]) -> Vec<Vec<f64>> {
    let (m, n) = (a.len(), a[0].len());
    let mut out = Vec::new();
    for basis in subsets(n, m) {
        let sub: Vec<Vec<f64>> = a.iter().map(|row| basis.iter().map(|&j| row[j]).collect()).collect();
        if let Some(xb) = solve_dense(sub, b.to_vec()) {
            if xb.iter().all(|&v| v >= -1e-9) {
                let mut x = vec![0.0; n];
                for (k, &j) in basis.iter().enumerate() {
                    x[j] = xb[k].max(0.0);
                }
                out.push(x);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Oracle {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

/// Vertex enumeration for `min c^T x, A x = b, x >= 0`.
///
/// Unboundedness is decided on the extreme rays: vertices of
/// `{d >= 0, A d = 0, 1^T d = 1}`.
pub fn lp_oracle(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Oracle {
    let vertices = basic_feasible_solutions(a, b);
    if vertices.is_empty() {
        return Oracle::Infeasible;
    }
    let mut ray_rows: Vec<Vec<f64>> = a.to_vec();
    ray_rows.push(vec![1.0; c.len()]);
    let mut ray_rhs = vec![0.0; a.len()];
    ray_rhs.push(1.0);
    let rays = if rank(&ray_rows) == ray_rows.len() {
        basic_feasible_solutions(&ray_rows, &ray_rhs)
    } else {
        // only when 1 lies in the row space of A; then A d = 0 forces 1^T d = 0
        vec![]
    };
    let dot = |x: &[f64]| x.iter().zip(c).map(|(x, c)| x * c).sum::<f64>();
    if rays.iter().any(|d| dot(d) < -1e-9) {
        return Oracle::Unbounded;
    }
    Oracle::Optimal(vertices.iter().map(|x| dot(x)).fold(f64::INFINITY, f64::min))
}

/// `g_i(t)` in closed form: every row keeps its mass on its cheapest
/// column other than `i` and the rows cheapest to redirect fill column `i`
/// up to `t` (a fractional knapsack).
pub fn greedy_inner_cost(c: &CostMatrix, p: &[f64], i: usize, t: f64) -> f64 {
    let n = p.len();
    if n == 1 {
        return c.get(0, 0);
    }
    let mut base = 0.0;
    let mut extra: Vec<(f64, f64)> = Vec::with_capacity(n);
    for j in 0..n {
        let m = (0..n).filter(|&k| k != i).map(|k| c.get(j, k)).fold(f64::INFINITY, f64::min);
        base += p[j] * m;
        extra.push((c.get(j, i) - m, p[j]));
    }
    extra.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut left = t;
    let mut value = base;
    for (d, w) in extra {
        if left <= 0.0 {
            break;
        }
        let a = w.min(left);
        value += a * d;
        left -= a;
    }
    value
}

/// Group-lasso relaxed objective of a dense plan.
pub fn son_value(c: &CostMatrix, plan: &[Vec<f64>], p_norm: f64, lambda: f64) -> f64 {
    let n = plan.len();
    let m = plan[0].len();
    let mut v = 0.0;
    for i in 0..n {
        for j in 0..m {
            v += c.get(i, j) * plan[i][j];
        }
    }
    for j in 0..m {
        v += lambda / p_norm * (0..n).map(|i| plan[i][j] * plan[i][j]).sum::<f64>().sqrt();
    }
    v
}

/// Minimum of the two-point group-lasso objective over a `k x k` grid of
/// row-feasible plans.
pub fn son_grid_two_points(c: &CostMatrix, p: &[f64], lambda: f64, k: usize) -> f64 {
    let pn = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let mut best = f64::INFINITY;
    for ia in 0..k {
        let a = p[0] * ia as f64 / (k - 1) as f64;
        for ib in 0..k {
            let b = p[1] * ib as f64 / (k - 1) as f64;
            let plan = vec![vec![a, p[0] - a], vec![b, p[1] - b]];
            best = best.min(son_value(c, &plan, pn, lambda));
        }
    }
    best
}

/// Medoid by enumeration of the single-column plans.
pub fn medoid_by_enumeration(c: &CostMatrix, p: &[f64]) -> usize {
    let mut best = (0, f64::INFINITY);
    for j in 0..c.cols() {
        let v: f64 = (0..c.rows()).map(|i| p[i] * c.get(i, j)).sum();
        if v < best.1 - 1e-15 {
            best = (j, v);
        }
    }
    best.0
}
