//! The inverse-infinity-norm relaxation: one convex subproblem per point,
//! solved by golden-section search over the mass of the heaviest column.
//!
//! ```bash
//! cargo run --release --example inverse_linf -- 1.0
//! ```

use sparse_omt::clustering::{extract_clusters, DEFAULT_TIE_TOL};
use sparse_omt::datagen::{four_cluster_config, sample_gaussian_mixture, FOUR_CLUSTER_SAMPLES};
use sparse_omt::linf::{inner_cost, solve_linf, DEFAULT_SEARCH_TOL};
use sparse_omt::{build_cost_matrix, ProbabilityVector};

fn main() -> sparse_omt::Result<()> {
    let lambda: f64 = std::env::args().nth(1).map_or(1.0, |s| s.parse().expect("lambda"));
    let cloud = sample_gaussian_mixture(&four_cluster_config(FOUR_CLUSTER_SAMPLES, 1))?;
    let c = build_cost_matrix(&cloud, None)?;
    let p0 = ProbabilityVector::uniform(cloud.len())?;

    let r = solve_linf(&c, &p0, lambda, DEFAULT_SEARCH_TOL)?;
    println!(
        "best column {} carrying mass {:.4}, objective {:.6}",
        r.best_index, r.best_mass, r.report.objective
    );

    println!("inner cost of column {} as its mass grows:", r.best_index);
    for k in 1..=5 {
        let t = k as f64 / 5.0;
        let g = inner_cost(&c, &p0, r.best_index, t)?;
        println!("  t = {t:.1}: cost {g:>9.4}, with penalty {:>9.4}", g + lambda / t);
    }

    let cl = extract_clusters(&r.plan, DEFAULT_TIE_TOL)?;
    let mut sizes = vec![0usize; cloud.len()];
    for &a in &cl.assignment {
        sizes[a] += 1;
    }
    let singletons = sizes.iter().filter(|&&s| s == 1).count();
    println!(
        "{} groups: largest has {} points, {singletons} points on their own",
        cl.cluster_count,
        sizes.iter().max().unwrap()
    );
    Ok(())
}
