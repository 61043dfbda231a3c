//! Sparse LU factorization of a simplex basis.
//!
//! Right-looking Gaussian elimination with Markowitz pivot selection and a
//! relative stability threshold. Column singletons are taken first (they
//! produce no fill), then acceptable row singletons, then the cheapest
//! Markowitz candidate among a few short columns.
//!
//! Row indices are constraint rows; column indices are basis positions.

use super::LpError;

const NONE: usize = usize::MAX;
/// Relative threshold a pivot must reach against its column maximum.
const STABILITY: f64 = 0.1;
/// Entries below this magnitude are treated as structural zeros when pivoting.
const ABS_PIVOT_TOL: f64 = 1e-11;
/// How many short columns the Markowitz search inspects.
const SEARCH_COLUMNS: usize = 4;

#[derive(Debug, Clone)]
struct Step {
    row: usize,
    col: usize,
    pivot: f64,
    /// Remaining entries of the pivot row, keyed by later-pivoted columns.
    upper: Vec<(usize, f64)>,
    /// Elimination multipliers, keyed by row.
    lower: Vec<(usize, f64)>,
}

#[derive(Debug, Clone)]
pub(crate) struct LuFactor {
    m: usize,
    steps: Vec<Step>,
}

/// Intrusive doubly linked buckets keyed by nonzero count.
struct Buckets {
    head: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    key: Vec<usize>,
}

impl Buckets {
    fn new(items: usize, max_key: usize) -> Self {
        Self {
            head: vec![NONE; max_key + 2],
            next: vec![NONE; items],
            prev: vec![NONE; items],
            key: vec![NONE; items],
        }
    }

    fn insert(&mut self, item: usize, key: usize) {
        if key >= self.head.len() {
            self.head.resize(key + 1, NONE);
        }
        self.key[item] = key;
        self.prev[item] = NONE;
        self.next[item] = self.head[key];
        if self.head[key] != NONE {
            self.prev[self.head[key]] = item;
        }
        self.head[key] = item;
    }

    fn remove(&mut self, item: usize) {
        let key = self.key[item];
        if key == NONE {
            return;
        }
        let (p, n) = (self.prev[item], self.next[item]);
        if p != NONE {
            self.next[p] = n;
        } else {
            self.head[key] = n;
        }
        if n != NONE {
            self.prev[n] = p;
        }
        self.key[item] = NONE;
    }

    fn update(&mut self, item: usize, key: usize) {
        if self.key[item] != key {
            self.remove(item);
            self.insert(item, key);
        }
    }

    fn first(&self, key: usize) -> usize {
        self.head.get(key).copied().unwrap_or(NONE)
    }
}

impl LuFactor {
    /// Factorizes the `m x m` matrix whose columns are `columns`.
    pub(crate) fn factorize(m: usize, columns: &[&[(usize, f64)]]) -> Result<Self, LpError> {
        debug_assert_eq!(columns.len(), m);
        let mut cols: Vec<Vec<(usize, f64)>> = columns
            .iter()
            .map(|c| c.iter().copied().filter(|&(_, v)| v != 0.0).collect())
            .collect();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, col) in cols.iter().enumerate() {
            for &(i, _) in col {
                rows[i].push(j);
            }
        }
        let mut col_buckets = Buckets::new(m, m);
        let mut row_buckets = Buckets::new(m, m);
        for j in 0..m {
            col_buckets.insert(j, cols[j].len());
        }
        for i in 0..m {
            row_buckets.insert(i, rows[i].len());
        }

        let mut steps = Vec::with_capacity(m);
        for _ in 0..m {
            if col_buckets.first(0) != NONE || row_buckets.first(0) != NONE {
                return Err(LpError::SingularBasis);
            }
            let (r, c) = choose_pivot(&cols, &rows, &col_buckets, &row_buckets)
                .ok_or(LpError::SingularBasis)?;
            col_buckets.remove(c);
            row_buckets.remove(r);

            let pivot_col = std::mem::take(&mut cols[c]);
            let pivot = pivot_col
                .iter()
                .find(|&&(i, _)| i == r)
                .map(|&(_, v)| v)
                .ok_or(LpError::SingularBasis)?;

            // Detach the pivot row from the other active columns.
            let row_cols = std::mem::take(&mut rows[r]);
            let mut upper = Vec::with_capacity(row_cols.len().saturating_sub(1));
            for &k in &row_cols {
                if k == c {
                    continue;
                }
                let pos = cols[k].iter().position(|&(i, _)| i == r).expect("pattern");
                let (_, v) = cols[k].swap_remove(pos);
                upper.push((k, v));
                col_buckets.update(k, cols[k].len());
            }

            let mut lower = Vec::with_capacity(pivot_col.len().saturating_sub(1));
            for &(i, v) in &pivot_col {
                if i == r {
                    continue;
                }
                let l = v / pivot;
                lower.push((i, l));
                let pos = rows[i].iter().position(|&k| k == c).expect("pattern");
                rows[i].swap_remove(pos);
                for &(k, u) in &upper {
                    match cols[k].iter_mut().find(|(ri, _)| *ri == i) {
                        Some(entry) => entry.1 -= l * u,
                        None => {
                            cols[k].push((i, -l * u));
                            rows[i].push(k);
                        }
                    }
                }
                row_buckets.update(i, rows[i].len());
            }
            for &(k, _) in &upper {
                col_buckets.update(k, cols[k].len());
            }

            steps.push(Step {
                row: r,
                col: c,
                pivot,
                upper,
                lower,
            });
        }
        Ok(Self { m, steps })
    }

    /// Solves `B x = rhs`. `rhs` is row-indexed and is overwritten; the
    /// solution is written to `out`, indexed by basis position.
    pub(crate) fn solve(&self, rhs: &mut [f64], out: &mut [f64]) {
        for s in &self.steps {
            let t = rhs[s.row];
            if t != 0.0 {
                for &(i, l) in &s.lower {
                    rhs[i] -= l * t;
                }
            }
        }
        for s in self.steps.iter().rev() {
            let mut v = rhs[s.row];
            for &(k, u) in &s.upper {
                v -= u * out[k];
            }
            out[s.col] = v / s.pivot;
        }
    }

    /// Solves `B^T y = rhs`. `rhs` is indexed by basis position and is
    /// overwritten; the solution is written to `out`, indexed by row.
    pub(crate) fn solve_transpose(&self, rhs: &mut [f64], out: &mut [f64]) {
        for s in &self.steps {
            let w = rhs[s.col] / s.pivot;
            out[s.row] = w;
            if w != 0.0 {
                for &(k, u) in &s.upper {
                    rhs[k] -= u * w;
                }
            }
        }
        for s in self.steps.iter().rev() {
            let mut acc = 0.0;
            for &(i, l) in &s.lower {
                acc += l * out[i];
            }
            out[s.row] -= acc;
        }
    }

    #[allow(dead_code)]
    pub(crate) fn dim(&self) -> usize {
        self.m
    }
}

fn column_max(col: &[(usize, f64)]) -> f64 {
    col.iter().fold(0.0, |m, &(_, v)| m.max(v.abs()))
}

fn choose_pivot(
    cols: &[Vec<(usize, f64)>],
    rows: &[Vec<usize>],
    col_buckets: &Buckets,
    row_buckets: &Buckets,
) -> Option<(usize, usize)> {
    // Column singleton: no elimination below the pivot.
    let mut c = col_buckets.first(1);
    while c != NONE {
        let (r, v) = cols[c][0];
        if v.abs() > ABS_PIVOT_TOL {
            return Some((r, c));
        }
        c = col_buckets.next[c];
    }
    // Row singleton: no fill, only multipliers.
    let mut r = row_buckets.first(1);
    while r != NONE {
        let c = rows[r][0];
        let col = &cols[c];
        let v = col.iter().find(|&&(i, _)| i == r).map_or(0.0, |&(_, v)| v);
        if v.abs() > ABS_PIVOT_TOL && v.abs() >= STABILITY * column_max(col) {
            return Some((r, c));
        }
        r = row_buckets.next[r];
    }
    // Markowitz search over the shortest columns.
    let mut best: Option<(usize, usize, usize, f64)> = None;
    let mut inspected = 0;
    for count in 2..col_buckets.head.len() {
        let mut c = col_buckets.first(count);
        while c != NONE {
            let col = &cols[c];
            let cmax = column_max(col);
            for &(i, v) in col {
                let a = v.abs();
                if a <= ABS_PIVOT_TOL || a < STABILITY * cmax {
                    continue;
                }
                let cost = (rows[i].len() - 1) * (count - 1);
                let better = match best {
                    None => true,
                    Some((_, _, bc, bv)) => cost < bc || (cost == bc && a > bv),
                };
                if better {
                    best = Some((i, c, cost, a));
                }
            }
            inspected += 1;
            if inspected >= SEARCH_COLUMNS && best.is_some() {
                return best.map(|(i, c, _, _)| (i, c));
            }
            c = col_buckets.next[c];
        }
    }
    best.map(|(i, c, _, _)| (i, c))
}
