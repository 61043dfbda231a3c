mod common;

use common::{greedy_inner_cost, random_costs, random_distribution};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sparse_omt::cardinality::max_column_norm;
use sparse_omt::linf::{golden_section, inner_cost, linf_objective, search_floor, solve_linf, DEFAULT_SEARCH_TOL};
use sparse_omt::lp::{solve_lp, LinearProgram, SimplexConfig};
use sparse_omt::{CostMatrix, ProbabilityVector};

/// `g_i(t)` from the full `N^2`-variable program: row sums `p` and column
/// `i` summing to exactly `t`.
fn full_inner_cost(c: &CostMatrix, p: &[f64], i: usize, t: f64) -> f64 {
    let n = p.len();
    let mut obj = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            obj[a * n + b] = c.get(a, b);
        }
    }
    let mut rows: Vec<Vec<(usize, f64)>> = (0..n).map(|a| (0..n).map(|b| (a * n + b, 1.0)).collect()).collect();
    let mut rhs = p.to_vec();
    rows.push((0..n).map(|a| (a * n + i, 1.0)).collect());
    rhs.push(t);
    let lp = LinearProgram::new(obj, rows, rhs).unwrap();
    let s = solve_lp(&lp, &SimplexConfig::default()).unwrap();
    assert!(s.is_optimal());
    s.objective_value
}

#[test]
fn inner_cost_matches_closed_form_and_full_program() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..60 {
        let n = rng.gen_range(2..=6);
        let c = random_costs(&mut rng, n, 3.0);
        let p = random_distribution(&mut rng, n);
        let i = rng.gen_range(0..n);
        let t = rng.gen_range(0.0..=1.0);
        let got = inner_cost(&c, &p, i, t).unwrap();
        let greedy = greedy_inner_cost(&c, p.weights(), i, t);
        assert!((got - greedy).abs() < 1e-9, "{got} vs {greedy}");
        let full = full_inner_cost(&c, p.weights(), i, t);
        assert!((got - full).abs() < 1e-9, "{got} vs full {full}");
    }
}

#[test]
fn inner_cost_is_convex_in_t() {
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..100 {
        let n = rng.gen_range(2..=7);
        let c = random_costs(&mut rng, n, 3.0);
        let p = random_distribution(&mut rng, n);
        let i = rng.gen_range(0..n);
        let (a, b): (f64, f64) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let (t1, t3) = (a.min(b), a.max(b));
        let g = |t: f64| inner_cost(&c, &p, i, t).unwrap();
        assert!(g(0.5 * (t1 + t3)) <= 0.5 * (g(t1) + g(t3)) + 1e-9);
    }
}

#[test]
fn golden_section_finds_the_minimiser() {
    let (t, v) = golden_section(|t| t + 0.25 / t, 0.01, 1.0, 1e-6).unwrap();
    assert!((t - 0.5).abs() <= 1e-6, "{t}");
    assert!((v - 1.0).abs() < 1e-9);
    // monotone on the bracket: the endpoint wins
    let (t, _) = golden_section(|t| 1.0 / t, 0.1, 1.0, 1e-6).unwrap();
    assert!((t - 1.0).abs() <= 1e-6);
}

#[test]
fn per_index_values_match_a_dense_grid() {
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..10 {
        let c = random_costs(&mut rng, 5, 0.3);
        let p = random_distribution(&mut rng, 5);
        let lambda = rng.gen_range(0.005..0.2);
        let r = solve_linf(&c, &p, lambda, DEFAULT_SEARCH_TOL).unwrap();
        let lo = search_floor(&p);
        for i in 0..5 {
            let grid = (0..200)
                .map(|k| lo + (1.0 - lo) * k as f64 / 199.0)
                .map(|t| greedy_inner_cost(&c, p.weights(), i, t) + lambda / t)
                .fold(f64::INFINITY, f64::min);
            let got = r.per_index_values[i];
            assert!((got - grid).abs() <= 1e-3, "index {i}: {got} vs grid {grid}");
            assert!(got <= grid + 1e-9);
        }
    }
}

#[test]
fn witness_attains_the_reported_value() {
    let mut rng = StdRng::seed_from_u64(44);
    for _ in 0..10 {
        let n = rng.gen_range(2..=8);
        let c = random_costs(&mut rng, n, 2.0);
        let p = random_distribution(&mut rng, n);
        let lambda = rng.gen_range(0.01..1.0);
        let r = solve_linf(&c, &p, lambda, DEFAULT_SEARCH_TOL).unwrap();
        let direct = linf_objective(&c, &r.plan, lambda);
        assert!((direct - r.report.objective).abs() < 1e-6 * r.report.objective.max(1.0));
        let best = r.per_index_values.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(r.per_index_values[r.best_index], best);
        assert!(r.per_index_values[..r.best_index].iter().all(|&v| v > best));
        assert!(max_column_norm(&r.plan) <= p.norm2() + 1e-9);
    }
}

#[test]
fn single_point_and_bad_inputs() {
    let c = CostMatrix::from_rows(vec![vec![0.0]]).unwrap();
    let p = ProbabilityVector::uniform(1).unwrap();
    let r = solve_linf(&c, &p, 1.0, DEFAULT_SEARCH_TOL).unwrap();
    assert!((r.report.objective - 1.0).abs() < 1e-12);
    assert!(solve_linf(&c, &p, 0.0, DEFAULT_SEARCH_TOL).is_err());
    assert!(solve_linf(&c, &p, 1.0, 0.0).is_err());
}
