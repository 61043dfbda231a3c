//! Facility-location LP along a lambda path, each solve warm-started from
//! the previous optimal basis.
//!
//! ```bash
//! cargo run --release --example facility_relaxation
//! ```

use std::time::Instant;

use sparse_omt::clustering::{adjusted_rand_index, extract_clusters, DEFAULT_TIE_TOL};
use sparse_omt::datagen::{four_cluster_config, sample_gaussian_mixture, FOUR_CLUSTER_SAMPLES};
use sparse_omt::experiment::log_grid;
use sparse_omt::facility::{build_facility_lp, solve_facility_lp};
use sparse_omt::lp::SimplexConfig;
use sparse_omt::{build_cost_matrix, ProbabilityVector};

fn main() -> sparse_omt::Result<()> {
    let cloud = sample_gaussian_mixture(&four_cluster_config(FOUR_CLUSTER_SAMPLES, 1))?;
    let truth = cloud.labels().unwrap();
    let c = build_cost_matrix(&cloud, None)?;
    let p0 = ProbabilityVector::uniform(cloud.len())?;
    let grid = log_grid(1.0, 2000.0, 15);

    let base = build_facility_lp(&c, &p0, grid[0])?;
    let mut basis: Option<Vec<usize>> = None;
    println!("{:>10} {:>8} {:>8} {:>7} {:>6} {:>8}", "lambda", "sum y", "pivots", "groups", "ARI", "ms");
    for lambda in grid {
        let t = Instant::now();
        let lp = base.with_lambda(&c, lambda)?;
        let r = solve_facility_lp(&lp, &c, &p0, basis.as_deref(), &SimplexConfig::default())?;
        basis = Some(r.basis.clone());
        let cl = extract_clusters(&r.plan, DEFAULT_TIE_TOL)?;
        println!(
            "{lambda:>10.3} {:>8.3} {:>8} {:>7} {:>6.3} {:>8.1}{}",
            r.openings.iter().sum::<f64>(),
            r.report.iterations,
            cl.cluster_count,
            adjusted_rand_index(truth, &cl.assignment)?,
            t.elapsed().as_secs_f64() * 1e3,
            if r.openings_unique { "" } else { "  (ties in y)" }
        );
    }
    Ok(())
}
