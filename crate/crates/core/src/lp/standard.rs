use super::{LinearProgram, LpError, LpSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `a^T x <= b`
    Le,
    /// `a^T x >= b`
    Ge,
    /// `a^T x = b`
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Simple bounds `lower <= x <= upper`; `upper` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableBounds {
    pub lower: f64,
    pub upper: f64,
}

impl Default for VariableBounds {
    fn default() -> Self {
        Self {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }
}

/// A minimisation problem with mixed constraints and simple bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralLp {
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
    bounds: Vec<VariableBounds>,
}

impl GeneralLp {
    /// `min objective^T x` with `x >= 0` and no constraints yet.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: vec![VariableBounds::default(); n],
        }
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Adds a constraint and returns its index.
    pub fn add(&mut self, coefficients: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn less_equal(&mut self, coefficients: Vec<(usize, f64)>, rhs: f64) -> usize {
        self.add(coefficients, Relation::Le, rhs)
    }

    pub fn greater_equal(&mut self, coefficients: Vec<(usize, f64)>, rhs: f64) -> usize {
        self.add(coefficients, Relation::Ge, rhs)
    }

    pub fn equal(&mut self, coefficients: Vec<(usize, f64)>, rhs: f64) -> usize {
        self.add(coefficients, Relation::Eq, rhs)
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.bounds[var] = VariableBounds { lower, upper };
    }

    pub fn set_upper(&mut self, var: usize, upper: f64) {
        self.bounds[var].upper = upper;
    }
}

/// A standard-form program together with the map back to the original
/// variables.
///
/// Column layout: original variables (shifted by their lower bounds) first,
/// then one slack or surplus per inequality in constraint order, then one
/// slack per finite upper bound in variable order. Row layout: the retained
/// constraints in order, then the upper-bound rows.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardForm {
    program: LinearProgram,
    original_count: usize,
    shift: Vec<f64>,
    objective_offset: f64,
    constraint_row: Vec<Option<usize>>,
    constraint_slack: Vec<Option<usize>>,
    bound_row: Vec<Option<usize>>,
    bound_slack: Vec<Option<usize>>,
}

impl StandardForm {
    pub fn program(&self) -> &LinearProgram {
        &self.program
    }

    pub fn original_count(&self) -> usize {
        self.original_count
    }

    /// Values of the original variables for a standard-form point.
    pub fn original_values(&self, x: &[f64]) -> Vec<f64> {
        (0..self.original_count)
            .map(|k| x[k] + self.shift[k])
            .collect()
    }

    /// Original objective value of a standard-form solution.
    pub fn original_objective(&self, solution: &LpSolution) -> f64 {
        solution.objective_value + self.objective_offset
    }

    /// Row of constraint `c`; `None` when the constraint was vacuous.
    pub fn constraint_row(&self, c: usize) -> Option<usize> {
        self.constraint_row[c]
    }

    /// Slack or surplus column of inequality `c`.
    pub fn constraint_slack(&self, c: usize) -> Option<usize> {
        self.constraint_slack[c]
    }

    pub fn bound_row(&self, var: usize) -> Option<usize> {
        self.bound_row[var]
    }

    pub fn bound_slack(&self, var: usize) -> Option<usize> {
        self.bound_slack[var]
    }

    /// Replaces the objective over the original variables (same shape).
    pub fn with_objective(&self, objective: &[f64]) -> Result<Self, LpError> {
        if objective.len() != self.original_count {
            return Err(LpError::Dimension {
                expected: self.original_count,
                got: objective.len(),
            });
        }
        let mut c = vec![0.0; self.program.variable_count()];
        c[..self.original_count].copy_from_slice(objective);
        let offset = objective.iter().zip(&self.shift).map(|(c, l)| c * l).sum();
        Ok(Self {
            program: self.program.with_objective(c)?,
            objective_offset: offset,
            ..self.clone()
        })
    }
}

/// Converts a general problem into `min c^T x, A x = b, x >= 0`.
///
/// Lower bounds are removed by shifting, finite upper bounds become rows with
/// their own slack, `<=` rows gain a slack and `>=` rows a surplus. Rows with
/// a negative right-hand side are negated by [`LinearProgram::new`].
pub fn to_standard_form(problem: &GeneralLp) -> Result<StandardForm, LpError> {
    let n = problem.objective.len();
    for (var, b) in problem.bounds.iter().enumerate() {
        if !b.lower.is_finite() || b.upper.is_nan() {
            return Err(LpError::NonFinite("variable bounds"));
        }
        if b.upper < b.lower {
            return Err(LpError::ContradictoryBounds {
                var,
                lower: b.lower,
                upper: b.upper,
            });
        }
    }
    let shift: Vec<f64> = problem.bounds.iter().map(|b| b.lower).collect();
    let objective_offset = problem
        .objective
        .iter()
        .zip(&shift)
        .map(|(c, l)| c * l)
        .sum();

    let inequality_count = problem
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let bounded: Vec<usize> = (0..n)
        .filter(|&k| problem.bounds[k].upper.is_finite())
        .collect();
    let total = n + inequality_count + bounded.len();

    let mut objective = vec![0.0; total];
    objective[..n].copy_from_slice(&problem.objective);

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut constraint_row = Vec::with_capacity(problem.constraints.len());
    let mut constraint_slack = Vec::with_capacity(problem.constraints.len());
    let mut next_slack = n;
    for (ci, c) in problem.constraints.iter().enumerate() {
        let mut row = Vec::with_capacity(c.coefficients.len() + 1);
        let mut b = c.rhs;
        for &(k, a) in &c.coefficients {
            if k >= n {
                return Err(LpError::VariableOutOfRange { index: k, count: n });
            }
            if a != 0.0 {
                row.push((k, a));
                b -= a * shift[k];
            }
        }
        let slack = match c.relation {
            Relation::Le => Some((next_slack, 1.0)),
            Relation::Ge => Some((next_slack, -1.0)),
            Relation::Eq => None,
        };
        if let Some(s) = slack {
            row.push(s);
            next_slack += 1;
        }
        if row.is_empty() {
            // 0 = b
            if b != 0.0 {
                return Err(LpError::InconsistentRow(ci));
            }
            constraint_row.push(None);
            constraint_slack.push(None);
            continue;
        }
        constraint_row.push(Some(rows.len()));
        constraint_slack.push(slack.map(|s| s.0));
        rows.push(row);
        rhs.push(b);
    }
    let mut bound_row = vec![None; n];
    let mut bound_slack = vec![None; n];
    for &k in &bounded {
        let b = problem.bounds[k];
        bound_row[k] = Some(rows.len());
        bound_slack[k] = Some(next_slack);
        rows.push(vec![(k, 1.0), (next_slack, 1.0)]);
        rhs.push(b.upper - b.lower);
        next_slack += 1;
    }
    debug_assert_eq!(next_slack, total);
    let program = LinearProgram::new(objective, rows, rhs)?;
    Ok(StandardForm {
        program,
        original_count: n,
        shift,
        objective_offset,
        constraint_row,
        constraint_slack,
        bound_row,
        bound_slack,
    })
}
