//! Two-phase revised simplex.
//!
//! Phase 1 minimises the sum of artificial variables from a crash basis that
//! reuses positive singleton columns (slacks) where possible. Phase 2 starts
//! from the phase-1 basis with artificials barred from entering. Pricing is
//! Dantzig's rule until a run of `3 m` consecutive degenerate pivots, after
//! which Bland's rule is used until the next nondegenerate step.

use super::factor::LuFactor;
use super::{LinearProgram, LpError, LpSolution};
use crate::domain::SolveStatus;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexConfig {
    /// Pivot budget; `None` means `50 * (variables + constraints)`.
    pub max_pivots: Option<usize>,
    /// Smallest admissible pivot element in the ratio test.
    pub pivot_tolerance: f64,
    /// Ratio-test (primal feasibility) tolerance.
    pub ratio_tolerance: f64,
    /// Reduced costs above `-tol * max(1, |c_j|)` count as nonnegative.
    pub optimality_tolerance: f64,
    /// Phase-1 objective above this means the program is infeasible.
    pub infeasibility_threshold: f64,
    /// Pivots between fresh factorizations of the basis.
    pub refactor_interval: usize,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            max_pivots: None,
            pivot_tolerance: 1e-9,
            ratio_tolerance: 1e-9,
            optimality_tolerance: 1e-9,
            infeasibility_threshold: 1e-7,
            refactor_interval: 50,
        }
    }
}

impl SimplexConfig {
    fn pivot_budget(&self, lp: &LinearProgram) -> usize {
        self.max_pivots
            .unwrap_or(50 * (lp.variable_count() + lp.constraint_count()))
    }
}

/// Solves `lp` from a cold start.
pub fn solve_lp(lp: &LinearProgram, config: &SimplexConfig) -> Result<LpSolution, LpError> {
    let mut s = Simplex::new(lp, config);
    s.crash();
    s.refactor()?;
    s.run_two_phase()
}

/// Solves `lp` starting from `basis` (one column per row, as returned in
/// [`LpSolution::basis`]). Falls back to a cold start when the basis is
/// singular or primal infeasible for this program.
pub fn solve_lp_from_basis(
    lp: &LinearProgram,
    basis: &[usize],
    config: &SimplexConfig,
) -> Result<LpSolution, LpError> {
    let m = lp.constraint_count();
    let n = lp.variable_count();
    if basis.len() != m {
        return Err(LpError::InvalidBasis(format!(
            "expected {m} columns, got {}",
            basis.len()
        )));
    }
    let mut seen = vec![false; n + m];
    for &j in basis {
        if j >= n + m || seen[j] {
            return Err(LpError::InvalidBasis(format!(
                "column {j} out of range or repeated"
            )));
        }
        seen[j] = true;
    }
    let mut s = Simplex::new(lp, config);
    s.set_basis(basis);
    let warm_ok = s.refactor().is_ok() && s.basis_is_feasible();
    if !warm_ok {
        return solve_lp(lp, config);
    }
    s.phase_two_from_current()
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    Budget,
}

struct Eta {
    position: usize,
    pivot: f64,
    others: Vec<(usize, f64)>,
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    cfg: &'a SimplexConfig,
    m: usize,
    n: usize,
    basis: Vec<usize>,
    position: Vec<usize>,
    x_basic: Vec<f64>,
    lu: Option<LuFactor>,
    etas: Vec<Eta>,
    pivots: usize,
    budget: usize,
    degenerate_run: usize,
    bland: bool,
    artificial_cols: Vec<[(usize, f64); 1]>,
    work_row: Vec<f64>,
}

const NOT_BASIC: usize = usize::MAX;

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, cfg: &'a SimplexConfig) -> Self {
        let m = lp.constraint_count();
        let n = lp.variable_count();
        Self {
            lp,
            cfg,
            m,
            n,
            basis: vec![NOT_BASIC; m],
            position: vec![NOT_BASIC; n + m],
            x_basic: vec![0.0; m],
            lu: None,
            etas: Vec::new(),
            pivots: 0,
            budget: cfg.pivot_budget(lp),
            degenerate_run: 0,
            bland: false,
            artificial_cols: (0..m).map(|i| [(i, 1.0)]).collect(),
            work_row: vec![0.0; m],
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n
    }

    fn column(&self, j: usize) -> &[(usize, f64)] {
        if j < self.n {
            self.lp.column(j)
        } else {
            &self.artificial_cols[j - self.n]
        }
    }

    fn cost(&self, j: usize, phase: u8) -> f64 {
        match (phase, self.is_artificial(j)) {
            (1, true) => 1.0,
            (1, false) => 0.0,
            (_, true) => 0.0,
            (_, false) => self.lp.objective()[j],
        }
    }

    fn set_basis(&mut self, basis: &[usize]) {
        self.position.iter_mut().for_each(|p| *p = NOT_BASIC);
        for (r, &j) in basis.iter().enumerate() {
            self.basis[r] = j;
            self.position[j] = r;
        }
    }

    /// Slack-like singleton columns with a positive entry seed the basis;
    /// remaining rows get their artificial.
    fn crash(&mut self) {
        let mut covered = vec![NOT_BASIC; self.m];
        for j in 0..self.n {
            let col = self.lp.column(j);
            if col.len() == 1 {
                let (i, a) = col[0];
                if a > 0.0 && covered[i] == NOT_BASIC {
                    covered[i] = j;
                }
            }
        }
        let basis: Vec<usize> = covered
            .iter()
            .enumerate()
            .map(|(i, &j)| if j == NOT_BASIC { self.n + i } else { j })
            .collect();
        self.set_basis(&basis);
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let cols: Vec<&[(usize, f64)]> = self.basis.iter().map(|&j| self.column(j)).collect();
        let lu = LuFactor::factorize(self.m, &cols)?;
        self.lu = Some(lu);
        self.etas.clear();
        self.work_row.copy_from_slice(self.lp.rhs());
        let lu = self.lu.as_ref().expect("factorized");
        lu.solve(&mut self.work_row, &mut self.x_basic);
        Ok(())
    }

    fn basis_is_feasible(&self) -> bool {
        let tol = self.cfg.ratio_tolerance;
        self.basis.iter().zip(&self.x_basic).all(|(&j, &x)| {
            if self.is_artificial(j) {
                x.abs() <= tol
            } else {
                x >= -tol
            }
        })
    }

    /// `B^{-1} a_j`, indexed by basis position.
    fn ftran(&mut self, j: usize, out: &mut [f64]) {
        self.work_row.iter_mut().for_each(|v| *v = 0.0);
        let lp = self.lp;
        if j < self.n {
            for &(i, a) in lp.column(j) {
                self.work_row[i] = a;
            }
        } else {
            self.work_row[j - self.n] = 1.0;
        }
        let lu = self.lu.as_ref().expect("factorized");
        lu.solve(&mut self.work_row, out);
        for eta in &self.etas {
            let xr = out[eta.position] / eta.pivot;
            out[eta.position] = xr;
            if xr != 0.0 {
                for &(i, a) in &eta.others {
                    out[i] -= a * xr;
                }
            }
        }
    }

    /// Solves `y^T B = rhs^T` for `rhs` indexed by basis position.
    fn btran(&mut self, rhs: &mut [f64], y: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            let mut v = rhs[eta.position];
            for &(i, a) in &eta.others {
                v -= a * rhs[i];
            }
            rhs[eta.position] = v / eta.pivot;
        }
        let lu = self.lu.as_ref().expect("factorized");
        lu.solve_transpose(rhs, y);
    }

    fn duals(&mut self, phase: u8) -> Vec<f64> {
        let mut cb: Vec<f64> = self.basis.iter().map(|&j| self.cost(j, phase)).collect();
        let mut y = vec![0.0; self.m];
        self.btran(&mut cb, &mut y);
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64], phase: u8) -> f64 {
        let dot: f64 = self.column(j).iter().map(|&(i, a)| a * y[i]).sum();
        self.cost(j, phase) - dot
    }

    fn price(&self, y: &[f64], phase: u8) -> Option<usize> {
        let tol = self.cfg.optimality_tolerance;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n {
            if self.position[j] != NOT_BASIC {
                continue;
            }
            let d = self.reduced_cost(j, y, phase);
            let c = self.cost(j, phase).abs().max(1.0);
            if d >= -tol * c {
                continue;
            }
            if self.bland {
                return Some(j);
            }
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Harris-style two-pass ratio test; Bland mode uses the exact minimum
    /// with smallest-index ties.
    fn ratio_test(&self, alpha: &[f64], phase: u8) -> Option<usize> {
        let ptol = self.cfg.pivot_tolerance;
        let delta = self.cfg.ratio_tolerance;
        if phase == 2 {
            // A zero-level artificial in the basis must leave as soon as it
            // would move.
            let mut pick: Option<(usize, f64)> = None;
            for r in 0..self.m {
                if self.is_artificial(self.basis[r]) && alpha[r].abs() > ptol {
                    let a = alpha[r].abs();
                    if pick.map_or(true, |(_, pa)| a > pa) {
                        pick = Some((r, a));
                    }
                }
            }
            if let Some((r, _)) = pick {
                return Some(r);
            }
        }
        if self.bland {
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = alpha[r];
                if a <= ptol {
                    continue;
                }
                let ratio = self.x_basic[r].max(0.0) / a;
                let better = match best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < bratio - delta
                            || (ratio <= bratio + delta && self.basis[r] < self.basis[br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            return best.map(|(r, _)| r);
        }
        let mut bound = f64::INFINITY;
        for r in 0..self.m {
            let a = alpha[r];
            if a > ptol {
                bound = bound.min((self.x_basic[r].max(0.0) + delta) / a);
            }
        }
        if !bound.is_finite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.m {
            let a = alpha[r];
            if a > ptol && self.x_basic[r].max(0.0) / a <= bound {
                if best.map_or(true, |(_, ba)| a > ba) {
                    best = Some((r, a));
                }
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) -> Result<(), LpError> {
        let leaving = self.basis[r];
        // a zero-level artificial forced out on a negative pivot must not move x
        let theta = (self.x_basic[r].max(0.0) / alpha[r]).max(0.0);
        for (i, x) in self.x_basic.iter_mut().enumerate() {
            if i != r && alpha[i] != 0.0 {
                *x -= theta * alpha[i];
            }
        }
        self.x_basic[r] = theta;
        self.position[leaving] = NOT_BASIC;
        self.basis[r] = q;
        self.position[q] = r;
        self.pivots += 1;

        if theta <= 1e-12 {
            self.degenerate_run += 1;
            if self.degenerate_run >= 3 * self.m.max(1) {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
            self.bland = false;
        }

        let others = alpha
            .iter()
            .enumerate()
            .filter(|&(i, a)| i != r && a.abs() > 1e-14)
            .map(|(i, &a)| (i, a))
            .collect();
        self.etas.push(Eta {
            position: r,
            pivot: alpha[r],
            others,
        });
        if self.etas.len() >= self.cfg.refactor_interval {
            self.refactor()?;
        }
        Ok(())
    }

    fn run_phase(&mut self, phase: u8) -> Result<PhaseEnd, LpError> {
        let mut alpha = vec![0.0; self.m];
        loop {
            if self.pivots >= self.budget {
                return Ok(PhaseEnd::Budget);
            }
            let y = self.duals(phase);
            let Some(q) = self.price(&y, phase) else {
                return Ok(PhaseEnd::Optimal);
            };
            self.ftran(q, &mut alpha);
            let Some(r) = self.ratio_test(&alpha, phase) else {
                return Ok(PhaseEnd::Unbounded);
            };
            self.pivot(r, q, &alpha)?;
        }
    }

    fn artificial_mass(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.x_basic)
            .filter(|(&j, _)| self.is_artificial(j))
            .map(|(_, &x)| x.max(0.0))
            .sum()
    }

    /// Pivots zero-level artificials out of the basis where a structural
    /// column can replace them; the rest sit on redundant rows.
    fn expel_artificials(&mut self) -> Result<(), LpError> {
        let mut alpha = vec![0.0; self.m];
        for r in 0..self.m {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let mut unit = vec![0.0; self.m];
            unit[r] = 1.0;
            let mut rho = vec![0.0; self.m];
            self.btran(&mut unit, &mut rho);
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if self.position[j] != NOT_BASIC {
                    continue;
                }
                let v: f64 = self.lp.column(j).iter().map(|&(i, a)| a * rho[i]).sum();
                if v.abs() > 1e-7 && best.map_or(true, |(_, bv)| v.abs() > bv) {
                    best = Some((j, v.abs()));
                }
            }
            if let Some((q, _)) = best {
                self.ftran(q, &mut alpha);
                // Degenerate exchange; the artificial is at zero level.
                self.x_basic[r] = 0.0;
                self.pivot(r, q, &alpha)?;
                self.pivots -= 1;
            }
        }
        Ok(())
    }

    fn run_two_phase(mut self) -> Result<LpSolution, LpError> {
        let needs_phase_one = self.basis.iter().any(|&j| self.is_artificial(j));
        if needs_phase_one {
            match self.run_phase(1)? {
                PhaseEnd::Budget => return Ok(self.finish(SolveStatus::MaxIterations, 1)),
                PhaseEnd::Unbounded => {
                    // cannot happen: the phase-1 objective is bounded below
                    return Ok(self.finish(SolveStatus::Infeasible, 1));
                }
                PhaseEnd::Optimal => {}
            }
            if self.artificial_mass() > self.cfg.infeasibility_threshold {
                return Ok(self.finish(SolveStatus::Infeasible, 1));
            }
            self.expel_artificials()?;
            self.refactor()?;
        }
        self.phase_two_from_current()
    }

    fn phase_two_from_current(mut self) -> Result<LpSolution, LpError> {
        self.degenerate_run = 0;
        self.bland = false;
        let status = match self.run_phase(2)? {
            PhaseEnd::Optimal => SolveStatus::Optimal,
            PhaseEnd::Unbounded => SolveStatus::Unbounded,
            PhaseEnd::Budget => SolveStatus::MaxIterations,
        };
        if status == SolveStatus::Optimal && !self.etas.is_empty() {
            // fresh factorization for an accurate final point and certificate
            self.refactor()?;
        }
        Ok(self.finish(status, 2))
    }

    fn finish(mut self, status: SolveStatus, phase: u8) -> LpSolution {
        let mut primal = vec![0.0; self.n];
        for (r, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                let x = self.x_basic[r];
                primal[j] = if x < 0.0 && x > -self.cfg.ratio_tolerance {
                    0.0
                } else {
                    x
                };
            }
        }
        let objective_value = primal
            .iter()
            .zip(self.lp.objective())
            .map(|(x, c)| x * c)
            .sum();
        let y = self.duals(phase.max(2));
        let dual = y
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.lp.row_sign(i))
            .collect();
        LpSolution {
            primal,
            objective_value,
            basis: self.basis.clone(),
            dual,
            status,
            pivots: self.pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{to_standard_form, GeneralLp};

    fn solve(lp: &LinearProgram) -> LpSolution {
        solve_lp(lp, &SimplexConfig::default()).unwrap()
    }

    #[test]
    fn single_equality() {
        // min x, x = 1
        let lp = LinearProgram::new(vec![1.0], vec![vec![(0, 1.0)]], vec![1.0]).unwrap();
        let s = solve(&lp);
        assert!(s.is_optimal());
        assert!((s.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cheaper_variable_wins() {
        // min 2x + 3y, x + y = 1
        let lp =
            LinearProgram::new(vec![2.0, 3.0], vec![vec![(0, 1.0), (1, 1.0)]], vec![1.0]).unwrap();
        let s = solve(&lp);
        assert!(s.is_optimal());
        assert!((s.primal[0] - 1.0).abs() < 1e-12);
        assert!((s.objective_value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bounded_maximisation_via_slack() {
        // min -x, x <= 1
        let mut g = GeneralLp::new(vec![-1.0]);
        g.less_equal(vec![(0, 1.0)], 1.0);
        let sf = to_standard_form(&g).unwrap();
        let s = solve(sf.program());
        assert!(s.is_optimal());
        assert!((sf.original_values(&s.primal)[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_one_detects_contradiction() {
        // x >= 2, x <= 1
        let mut g = GeneralLp::new(vec![1.0]);
        g.greater_equal(vec![(0, 1.0)], 2.0);
        g.less_equal(vec![(0, 1.0)], 1.0);
        let sf = to_standard_form(&g).unwrap();
        assert_eq!(solve(sf.program()).status, SolveStatus::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        // min -x, x - y = 0
        let lp = LinearProgram::new(vec![-1.0, 0.0], vec![vec![(0, 1.0), (1, -1.0)]], vec![0.0])
            .unwrap();
        assert_eq!(solve(&lp).status, SolveStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // x + y = 1 twice
        let lp = LinearProgram::new(
            vec![1.0, 2.0],
            vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 2.0), (1, 2.0)]],
            vec![1.0, 2.0],
        )
        .unwrap();
        let s = solve(&lp);
        assert!(s.is_optimal());
        assert!((s.objective_value - 1.0).abs() < 1e-12);
        let again = solve_lp_from_basis(&lp, &s.basis, &SimplexConfig::default()).unwrap();
        assert_eq!(again.pivots, 0);
    }

    #[test]
    fn dual_certificate_closes_gap() {
        // min x + 2y + 3z, x + y + z = 1, x - z >= -0.5 (as -x + z <= 0.5)
        let mut g = GeneralLp::new(vec![1.0, 2.0, 3.0]);
        g.equal(vec![(0, 1.0), (1, 1.0), (2, 1.0)], 1.0);
        g.less_equal(vec![(0, -1.0), (2, 1.0)], 0.5);
        let sf = to_standard_form(&g).unwrap();
        let lp = sf.program();
        let s = solve(lp);
        assert!(s.is_optimal());
        assert!((s.objective_value - s.dual_objective(lp)).abs() < 1e-9);
        assert!(s.reduced_costs(lp).iter().all(|&d| d > -1e-9));
    }

    #[test]
    fn pivot_budget_reports_max_iterations() {
        let lp = LinearProgram::new(
            vec![1.0, 1.0, 1.0],
            vec![vec![(0, 1.0), (1, 1.0)], vec![(1, 1.0), (2, 1.0)]],
            vec![1.0, 1.0],
        )
        .unwrap();
        let cfg = SimplexConfig {
            max_pivots: Some(0),
            ..SimplexConfig::default()
        };
        assert_eq!(solve_lp(&lp, &cfg).unwrap().status, SolveStatus::MaxIterations);
    }
}
