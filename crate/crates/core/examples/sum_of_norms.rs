//! Group-lasso relaxation on the four-cluster mixture at a single lambda.
//!
//! ```bash
//! cargo run --release --example sum_of_norms -- 8.0
//! ```

use sparse_omt::clustering::{adjusted_rand_index, extract_clusters, DEFAULT_TIE_TOL};
use sparse_omt::datagen::{four_cluster_config, sample_gaussian_mixture, FOUR_CLUSTER_SAMPLES};
use sparse_omt::son::{solve_son, son_objective, AdmmConfig};
use sparse_omt::{build_cost_matrix, ProbabilityVector};

fn main() -> sparse_omt::Result<()> {
    let lambda: f64 = std::env::args().nth(1).map_or(8.0, |s| s.parse().expect("lambda"));
    let cloud = sample_gaussian_mixture(&four_cluster_config(FOUR_CLUSTER_SAMPLES, 1))?;
    let c = build_cost_matrix(&cloud, None)?;
    let p0 = ProbabilityVector::uniform(cloud.len())?;

    let cfg = AdmmConfig {
        record_history: true,
        ..AdmmConfig::default()
    };
    let r = solve_son(&c, &p0, lambda, &cfg)?;
    println!(
        "lambda {lambda}: {:?} after {} iterations, residuals {:.2e} / {:.2e}",
        r.report.status, r.report.iterations, r.report.primal_residual, r.report.dual_residual
    );
    println!("objective {:.6}", son_objective(&c, &r.plan, lambda));
    for (k, (rp, rd)) in r.history.iter().enumerate().step_by(100.max(r.history.len() / 10)) {
        println!("  iter {k:>5}: primal {rp:.2e}, dual {rd:.2e}");
    }

    let clusters = extract_clusters(&r.plan, DEFAULT_TIE_TOL)?;
    let ari = adjusted_rand_index(cloud.labels().unwrap(), &clusters.assignment)?;
    println!("{} clusters, representatives {:?}, ARI {ari:.3}", clusters.cluster_count, clusters.representatives);
    Ok(())
}
