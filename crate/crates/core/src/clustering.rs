//! Reading clusters off a transport plan, and scoring them.
//!
//! Point `i` is assigned to the column holding the largest share of its
//! mass; the columns that receive at least one point are the cluster
//! representatives.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::domain::TransportPlan;
use crate::error::{Error, Result};

pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusteringResult {
    /// Representative indices, ascending.
    pub representatives: Vec<usize>,
    /// Representative of each point.
    pub assignment: Vec<usize>,
    pub cluster_count: usize,
    /// Rows with no mass; each such point is its own representative.
    pub empty_rows: Vec<usize>,
}

impl ClusteringResult {
    /// Cluster labels `0..k` in order of the representatives.
    pub fn labels(&self) -> Vec<usize> {
        self.assignment
            .iter()
            .map(|a| self.representatives.binary_search(a).expect("representative"))
            .collect()
    }
}

/// Row-wise argmax; entries within `tie_tol` of the row maximum go to the
/// lowest column index.
pub fn extract_clusters(plan: &TransportPlan, tie_tol: f64) -> Result<ClusteringResult> {
    let (n, m) = plan.shape();
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, got: m });
    }
    let mut assignment = Vec::with_capacity(n);
    let mut empty_rows = Vec::new();
    for i in 0..n {
        let row = plan.row(i);
        let top = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top <= 0.0 {
            empty_rows.push(i);
            assignment.push(i);
            continue;
        }
        let j = row
            .iter()
            .position(|&v| v >= top - tie_tol)
            .expect("row maximum exists");
        assignment.push(j);
    }
    let representatives: Vec<usize> = assignment
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(ClusteringResult {
        cluster_count: representatives.len(),
        representatives,
        assignment,
        empty_rows,
    })
}

fn choose2(k: u64) -> f64 {
    (k * k.saturating_sub(1) / 2) as f64
}

/// Adjusted Rand index between two labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let n = a.len() as u64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&k| choose2(k)).sum();
    let sum_a: f64 = rows.values().map(|&k| choose2(k)).sum();
    let sum_b: f64 = cols.values().map(|&k| choose2(k)).sum();
    let total = choose2(n);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_a * sum_b / total;
    let max_index = (sum_a + sum_b) / 2.0;
    if max_index == expected {
        // both partitions trivial in the same way
        return Ok(if index == expected && sum_a == sum_b { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max_index - expected))
}
