//! Exact transport between two small point clouds.
//!
//! ```bash
//! cargo run --example exact_transport
//! ```

use sparse_omt::omt::{northwest_corner, solve_transport, wasserstein2};
use sparse_omt::{build_cost_matrix, PointCloud, ProbabilityVector};

fn main() -> sparse_omt::Result<()> {
    let source = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let target = PointCloud::new(vec![vec![2.0, 2.0], vec![3.0, 1.0]])?;
    let a = ProbabilityVector::new(vec![0.5, 0.25, 0.25])?;
    let b = ProbabilityVector::new(vec![0.4, 0.6])?;

    let c = build_cost_matrix(&source, Some(&target))?;
    let (plan, cost) = solve_transport(&a, &b, &c)?;
    println!("optimal plan:");
    for i in 0..plan.shape().0 {
        println!("  {:?}", plan.row(i).to_vec());
    }
    println!("cost {cost:.6}");

    let nw = northwest_corner(&a, &b)?;
    println!("northwest-corner cost {:.6}", nw.cost(&c)?);

    let (cost, metric) = wasserstein2(&source, &a, &target, &b)?;
    println!("W2^2 = {cost:.6}, W2 = {metric:.6}");
    Ok(())
}
